import { PACKET_SCHEMA, type ReviewPacket, type ReviewResponse } from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function detailOf(res: Response): Promise<string> {
  try {
    const body = await res.json();
    if (body && typeof body.detail === "string") return body.detail;
  } catch {
    // non-JSON error body; fall through to the status line
  }
  return `${res.status} ${res.statusText}`;
}

export async function fetchPacket(
  packetId: string,
  fetchFn: FetchLike = fetch,
): Promise<ReviewPacket> {
  const res = await fetchFn(`/api/packet/${encodeURIComponent(packetId)}`);
  if (!res.ok) {
    throw new ApiError(res.status, await detailOf(res));
  }
  const packet = (await res.json()) as ReviewPacket;
  if (packet.schema !== PACKET_SCHEMA) {
    throw new ApiError(0, `unexpected packet schema: ${packet.schema}`);
  }
  if (!Array.isArray(packet.entries) || packet.entries.length === 0) {
    throw new ApiError(0, "packet has no entries");
  }
  return packet;
}

export async function submitResponse(
  payload: ReviewResponse,
  fetchFn: FetchLike = fetch,
): Promise<void> {
  const res = await fetchFn("/api/responses", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });
  if (!res.ok) {
    throw new ApiError(res.status, await detailOf(res));
  }
}

export async function fetchAggregate(
  packetId: string,
  fetchFn: FetchLike = fetch,
): Promise<unknown> {
  const res = await fetchFn(`/api/aggregate/${encodeURIComponent(packetId)}`);
  if (!res.ok) {
    throw new ApiError(res.status, await detailOf(res));
  }
  return res.json();
}

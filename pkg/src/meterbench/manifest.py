"""Run manifests: enough provenance to replay any artifact byte-identically.

A manifest records the subcommand, its resolved flags, the active kernel
backend and hashes of every input and output file. Replaying re-invokes
the same subcommand with the same flags; determinism of the underlying
operations then guarantees identical bytes.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from . import __version__
from .kernels import active_backend

MANIFEST_SCHEMA = "meterbench.manifest/1"


def file_sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def text_sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class RunManifest:
    command: str
    flags: Dict[str, object]
    seed: Optional[int] = None
    pipeline_ids: List[str] = field(default_factory=list)
    config_hashes: Dict[str, str] = field(default_factory=dict)
    inputs: Dict[str, dict] = field(default_factory=dict)
    outputs: Dict[str, dict] = field(default_factory=dict)
    tool_version: str = __version__
    backend: str = field(default_factory=active_backend)

    def add_input(self, name: str, path) -> None:
        self.inputs[name] = {"path": str(path), "sha256": file_sha256(path)}

    def add_output(self, name: str, path) -> None:
        self.outputs[name] = {"path": str(path), "sha256": file_sha256(path)}

    def to_json(self) -> dict:
        return {
            "schema": MANIFEST_SCHEMA,
            "command": self.command,
            "flags": self.flags,
            "seed": self.seed,
            "pipeline_ids": self.pipeline_ids,
            "config_hashes": self.config_hashes,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "tool_version": self.tool_version,
            "backend": self.backend,
        }


def manifest_path(out: str) -> str:
    """DIR/manifest.json for directory outputs, FILE.manifest.json otherwise."""
    if os.path.isdir(out):
        return os.path.join(out, "manifest.json")
    return f"{out}.manifest.json"


def write_manifest(manifest: RunManifest, out: str) -> str:
    path = manifest_path(out)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest.to_json(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def read_manifest(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if data.get("schema") != MANIFEST_SCHEMA:
        raise ValueError(f"not a run manifest (schema={data.get('schema')!r})")
    return data


def flags_to_argv(command: str, flags: Dict[str, object]) -> List[str]:
    flags = dict(flags)
    positionals = flags.pop("_args", [])
    argv = [command]
    for key in sorted(flags):
        value = flags[key]
        if value is None or value is False:
            continue
        flag = f"--{key.replace('_', '-')}"
        if value is True:
            argv.append(flag)
        else:
            argv.extend([flag, str(value)])
    argv.extend(str(p) for p in positionals)
    return argv


def replay(manifest: dict, overrides: Optional[Dict[str, object]] = None) -> List[str]:
    """Re-run the recorded subcommand; returns the argv used."""
    from .cli import main
    flags = dict(manifest["flags"])
    if overrides:
        flags.update(overrides)
    argv = flags_to_argv(manifest["command"], flags)
    main(argv, standalone_mode=False)
    return argv


def verify_outputs(manifest: dict) -> Dict[str, bool]:
    """Compare recorded output hashes against the files on disk."""
    return {name: (Path(entry["path"]).exists()
                   and file_sha256(entry["path"]) == entry["sha256"])
            for name, entry in manifest["outputs"].items()}

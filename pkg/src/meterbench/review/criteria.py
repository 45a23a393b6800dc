"""The ten interpretability criteria rated by the expert panel."""

CRITERIA = (
    ("C1", "The explanation of the prediction is formally correct "
           "(i.e., readable, fluent and grammatically correct)."),
    ("C2", "From the explanation, the expert understands how the prediction "
           "is automatically made."),
    ("C3", "From the explanation, the expert understands the cause and effect "
           "of the prediction."),
    ("C4", "The explanation comprises factual and counterfactual pieces of "
           "information."),
    ("C5", "The explanation has sufficient detail."),
    ("C6", "The explanation is complete."),
    ("C7", "The explanation is useful to my goals."),
    ("C8", "The explanation shows how accurate the prediction is."),
    ("C9", "The explanation allows the expert to judge when should the "
           "prediction be trusted or not trusted."),
    ("C10", "The explanation of how the predictor works is satisfying."),
)

CRITERION_IDS = tuple(cid for cid, _ in CRITERIA)

AGREEMENT_ANCHORS = ("Strongly Disagree", "Somewhat Disagree", "Neutral",
                     "Somewhat Agree", "Strongly Agree")
SATISFACTION_ANCHORS = ("Very Dissatisfied", "Dissatisfied",
                        "Neither Satisfied Nor Dissatisfied", "Satisfied",
                        "Very Satisfied")

from .drafts import ExtractionDraft, FieldStatus, Validity
from .multistep import StepTrace, extract_multistep
from .parallel import extract_parallel, validate_question

__all__ = [
    "ExtractionDraft",
    "FieldStatus",
    "StepTrace",
    "Validity",
    "extract_multistep",
    "extract_parallel",
    "validate_question",
]

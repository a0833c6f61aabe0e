"""Pattern group inventory: the 12 scientific-uncertainty groups plus auxiliary sets."""

from enum import Enum


class SuGroup(Enum):
    """The twelve groups of scientific-uncertainty expressions.

    The value of each member is the human-readable description used in
    verdict explanations.
    """

    EXPLICIT_SU = "Explicit Scientific Uncertainty"
    MODALITY = "Modality"
    CONDITIONAL = "Conditional expression"
    HYPOTHESIS = "Hypothesis"
    PREDICTION = "Prediction"
    INTERROGATIVE = "Interrogative expression"
    NON_GENERALIZABLE = "Non-generalizable statement"
    ADVERBIAL_SU = "Adverbial uncertainty"
    NEGATION = "Negation"
    SUBJECTIVITY = "Subjectivity"
    CONJECTURAL = "Conjectural"
    DISAGREEMENT = "Disagreement"

    @property
    def description(self) -> str:
        return self.value


SU_GROUP_NAMES = tuple(g.name for g in SuGroup)

# Cancellation sets: a hit anywhere in the sentence revokes its uncertainty reading.
CANCELLATION_GROUPS = ("REBUTTAL", "CONFIRMATION", "NEUTRAL")

# Authorial-evidence sets consumed by the reference resolver.
AUTHORIAL_GROUPS = ("SELF_REF", "FORMER_REF")

AUX_GROUP_NAMES = CANCELLATION_GROUPS + AUTHORIAL_GROUPS

ALL_GROUP_NAMES = SU_GROUP_NAMES + AUX_GROUP_NAMES


def describe_group(group: str) -> str:
    """Description for explanation text; auxiliary groups use a title-case fallback."""
    if group in SU_GROUP_NAMES:
        return SuGroup[group].description
    return group.replace("_", " ").title()

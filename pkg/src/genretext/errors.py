"""Exception and warning types shared across the package."""


class GenretextError(Exception):
    """Base class for all package-specific errors."""


class SchemaError(GenretextError):
    """An input document does not match the expected file schema."""


class DanglingIdError(GenretextError):
    """A reference points at an id that is not declared."""

    def __init__(self, ref_id: str, context: str = ""):
        self.ref_id = ref_id
        msg = f"dangling reference {ref_id!r}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class UnknownGoalError(GenretextError):
    """The requested goal id does not exist in the task model."""


class NoPlanForGoalError(GenretextError):
    """The goal exists but no plan achieves it."""


class MissingDefaultError(GenretextError):
    """Bundle completion found an applicable system with no selection and no default."""

    def __init__(self, system: str):
        self.system = system
        super().__init__(f"no default for applicable system {system!r}")


class NoDistributionError(GenretextError):
    """The genre profile has no realization distribution for this (element, system) pair."""


class UnknownSystemError(GenretextError):
    """The named system is not part of the loaded network."""


class UnknownFeatureError(GenretextError):
    """A feature name does not belong to the system it was used with."""


class TooFewObservationsError(GenretextError):
    """A statistical test needs more observations than were supplied."""


class ShapeMismatchError(GenretextError):
    """Two frequency tables do not share the same row/feature shape."""


class UnresolvedLexemeError(GenretextError):
    """A lexeme reference or surface form cannot be resolved in the lexicon."""


class RenormalizationWarning(UserWarning):
    """A loaded distribution column deviated from 100% and was renormalized."""

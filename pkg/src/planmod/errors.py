"""Exception types shared across the toolkit."""


class InputError(ValueError):
    """Caller handed us something outside an operation's precondition."""


class FormulaSyntaxError(InputError):
    """Formula text does not match the grammar; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ResourceLimitError(RuntimeError):
    """An exhaustive search exceeded its configured cap.

    Raised instead of returning a possibly-wrong answer; the message says
    which cap fired and how to raise it.
    """


class SoundnessError(RuntimeError):
    """An oracle cross-check contradicted a reduction step.

    Desk-scale parameters void the theoretical guarantees, so every committed
    step is re-verified; this firing means a step would have been wrong.
    """

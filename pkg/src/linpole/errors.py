"""Exception types shared across the package."""


class LinpoleError(Exception):
    """Base class for domain errors."""


class NotLocal(LinpoleError):
    """A locality-algebra operation was attempted on a non-local pair."""


class NotLocalSpec(LinpoleError):
    """A fraction spec violates the pairwise-locality constraint on its letters."""


class NonHomogeneousPole(LinpoleError):
    """A denominator factor is not a homogeneous linear form."""


class ParseError(LinpoleError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EmptyWord(LinpoleError):
    """Operation undefined on the empty word."""


class WordEndsInX0(LinpoleError):
    """The word is outside the domain of the fraction map (trailing x0)."""


class ZeroCumulativeForm(LinpoleError):
    """A cumulative sum of assigned linear forms vanished."""


class DivergentIndex(LinpoleError):
    """A multiple zeta index with leading exponent 1 diverges."""


class TooManyVariables(LinpoleError):
    """Iterated evaluation over more variables than the permutation cap allows."""


class DependenceEscapesVars(LinpoleError):
    """The germ depends on directions outside the requested variable list."""


class EvaluatorDomain(LinpoleError):
    """The evaluator is not defined on the given input."""


class NotChen(LinpoleError):
    """Input is not presented over the Chen fraction alphabet."""


class IncompatibleGenerators(LinpoleError):
    """Transforms defined over different generator sets cannot be combined."""

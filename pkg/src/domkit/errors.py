"""Exception types. Every validation failure carries a minimal witness."""


class DomkitError(Exception):
    """Base class for all errors raised by domkit."""


class UnknownElement(DomkitError):
    def __init__(self, poset_name, element):
        self.poset_name = poset_name
        self.element = element
        super().__init__(f"{element!r} is not an element of poset {poset_name!r}")


class DuplicateElement(DomkitError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"duplicate element identifier {element!r}")


class NotReflexive(DomkitError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"relation is missing ({witness!r}, {witness!r})")


class NotAntisymmetric(DomkitError):
    def __init__(self, x, y):
        self.witness = (x, y)
        super().__init__(f"{x!r} <= {y!r} and {y!r} <= {x!r} with {x!r} != {y!r}")


class NotTransitive(DomkitError):
    def __init__(self, x, y, z):
        self.witness = (x, y, z)
        super().__init__(f"{x!r} <= {y!r} <= {z!r} but not {x!r} <= {z!r}")


class NotMonotone(DomkitError):
    def __init__(self, x, y, fx, fy):
        self.witness = (x, y)
        super().__init__(f"{x!r} <= {y!r} but image {fx!r} <= {fy!r} fails")


class NotTotal(DomkitError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"no image assigned for {element!r}")


class NotDirected(DomkitError):
    def __init__(self, x=None, y=None, empty=False):
        self.witness = None if empty else (x, y)
        self.empty = empty
        if empty:
            super().__init__("the empty subset is not directed")
        else:
            super().__init__(f"{x!r} and {y!r} have no upper bound inside the subset")


class EmptyIndex(DomkitError):
    def __init__(self):
        super().__init__("empty index is not allowed for products")


class BudgetExceeded(DomkitError):
    def __init__(self, needed, budget):
        self.needed = needed
        self.budget = budget
        super().__init__(f"search space {needed} exceeds budget {budget}")


class Mismatch(DomkitError):
    """Domain/codomain of composed arrows do not line up."""


class NotSection(DomkitError):
    def __init__(self, x, got):
        self.witness = x
        super().__init__(f"proj(emb({x!r})) = {got!r} != {x!r}")


class NotDeflation(DomkitError):
    def __init__(self, y, got):
        self.witness = y
        super().__init__(f"emb(proj({y!r})) = {got!r} is not <= {y!r}")


class NoAdjoint(DomkitError):
    def __init__(self, reason, witness=None):
        self.witness = witness
        super().__init__(reason)


class NotStrict(DomkitError):
    def __init__(self, got):
        self.got = got
        super().__init__(f"bottom maps to {got!r}, not to bottom")


class IndexNotDirected(DomkitError):
    def __init__(self, x, y):
        self.witness = (x, y)
        super().__init__(f"index elements {x!r}, {y!r} have no upper bound")


class FunctorialityFailure(DomkitError):
    def __init__(self, i, j, k):
        self.witness = (i, j, k)
        super().__init__(f"edge({i!r},{k!r}) != edge({j!r},{k!r}) o edge({i!r},{j!r})")


class ConeInvalid(DomkitError):
    def __init__(self, reason):
        super().__init__(reason)


class LubUndefined(DomkitError):
    """Internal consistency failure: a family that must be directed is not."""

    def __init__(self, x, y):
        self.witness = (x, y)
        super().__init__(f"family members {x!r}, {y!r} have no upper bound")


class NoStarterEp(DomkitError):
    def __init__(self, base_name, level1_name):
        super().__init__(
            f"no ep-pair {base_name!r} <-> {level1_name!r} exists to start the chain"
        )


class NotPointed(DomkitError):
    def __init__(self, poset_name):
        super().__init__(f"poset {poset_name!r} has no least element")


class DifferentChains(DomkitError):
    def __init__(self):
        super().__init__("finite-rank elements belong to different chains")


class ParseError(DomkitError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f" at line {line}" + (f", column {col}" if col is not None else "")
        super().__init__(message + where)


class MultipleVariables(DomkitError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"only the variable X is allowed, found {name!r}")


class UnknownConstant(DomkitError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown named poset {name!r}")

"""Exception types shared across the package."""


class PtriError(Exception):
    """Base class for all domain errors raised by this package."""


# --- construction / ingestion ---

class TripleOvershared(PtriError):
    """A vertex triple occurs in three or more tetrahedra."""


class SlotReused(PtriError):
    """A face slot appears in more than one gluing."""


class SelfGluedFace(PtriError):
    """A face slot is glued to itself."""


class BadPermutation(PtriError):
    """A gluing permutation is not a permutation of {0,1,2}."""


class BadEdgeIdentification(PtriError):
    """An explicit edge identification joins edges with mismatched endpoints."""


class FormatError(PtriError):
    """A ptri-1 / ptri2-1 file is malformed."""


# --- analysis ---

class ComplexNotClosed(PtriError):
    """Operation requires a closed pseudomanifold."""


class InconsistentSkeleton(PtriError):
    """Internal contradiction while assembling the singular skeleton."""


# --- moves ---

class MoveError(PtriError):
    """Base class for illegal bistellar moves."""


class BoundaryFace(MoveError):
    """2-3 move requested on an unglued face."""


class SameTetrahedron(MoveError):
    """2-3 move requested on a face glued to the same tetrahedron."""


class EdgeDegreeNot3(MoveError):
    """3-2 move requested on an edge whose link circle does not have length 3."""


class SingularEdge(MoveError):
    """3-2 move requested on an edge with two or more link circles."""


class RepeatedTetrahedron(MoveError):
    """3-2 move requested on an edge whose three tetrahedra are not distinct."""


class NotFourValent(MoveError):
    """4-1 move requested at a vertex that does not lie in exactly four distinct tetrahedra."""


class LinkNotSphere(MoveError):
    """4-1 move requested at a vertex whose link is not the 4-triangle sphere."""


class NoLegalMove(MoveError):
    """Random walk found no legal move under the given weights."""


# --- quantum / state sum ---

class ColorOutOfRange(PtriError):
    """A color lies outside {0, ..., r-2}."""


class NotClosed(PtriError):
    """State sum requested for a complex that is not a closed pseudomanifold."""


class Overflow(PtriError):
    """Contraction aborted: branch-visit guard exceeded."""


# --- constructions ---

class NotBoundary(PtriError):
    """cone_boundary requires a complex with boundary."""


class PartitionInvalid(PtriError):
    """A boundary-component partition does not cover each component exactly once."""


class NotClosedSurfaceComplex(PtriError):
    """suspension requires a closed 2-complex."""


class NotTorusBoundary(PtriError):
    """mapping cylinder attachment requires a torus boundary component."""


class GridIncompatible(PtriError):
    """The boundary torus does not carry a usable grid triangulation."""


class UnknownExample(PtriError):
    """Unknown example name."""

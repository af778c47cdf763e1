"""Exception types shared across the package."""


class SphPendError(Exception):
    """Base class for all package errors."""


class NotInRange(SphPendError):
    """The (h, l) point lies outside the admissible energy-momentum range."""


class DomainError(SphPendError):
    """An argument lies outside its mathematical domain."""


class ConvergenceError(SphPendError):
    """A bracketing solve failed to reach its tolerance."""


class QuadratureError(SphPendError):
    """Node doubling exhausted the cap without the integrals settling."""


class BranchCut(SphPendError):
    """Operation undefined on the l = 0 jump locus."""


class StepError(SphPendError):
    """Integrator constraint drift exceeded tolerance after projection."""


class EventError(SphPendError):
    """No first-return event found within the time budget."""


class RefinementLimit(SphPendError):
    """Branch continuation could not bound the step jump within the cap."""


class LoopInvalid(SphPendError):
    """Loop fails validation (leaves the regular region, or bad winding)."""


class LatticeAmbiguous(SphPendError):
    """Lattice transport could not be rounded to integers within the gate."""


class MissingPoint(SphPendError):
    """A required (n, m) point is absent from the spectrum window."""


class PinchCollision(SphPendError):
    """n*hbar hits the critical action 4/pi at m = 0; state excluded."""

"""Ladder and diagonal operators on the joint-spectrum basis lattice.

States are finitely supported complex combinations of basis elements indexed
by (n, m) with n >= 0.  Operators are sparse rules mapping one basis index to
finitely many weighted indices, so every relation below is checked exactly,
up to float rounding in the coefficients.
"""

from dataclasses import dataclass, field
from typing import Callable

from .errors import MissingPoint
from .spectrum import SpectrumPoint

BasisIndex = tuple[int, int]  # (n, m), n >= 0

COEFF_TOL = 1e-15  # per-coefficient tolerance, scaled by the comparison size


@dataclass
class StateVector:
    coeffs: dict[BasisIndex, complex] = field(default_factory=dict)

    @classmethod
    def basis(cls, n: int, m: int) -> "StateVector":
        if n < 0:
            raise ValueError("basis index needs n >= 0")
        return cls({(n, m): 1.0 + 0.0j})

    def inner(self, other: "StateVector") -> complex:
        # <self, other> with the first slot conjugated
        return sum(
            c.conjugate() * other.coeffs.get(idx, 0.0)
            for idx, c in self.coeffs.items()
        )

    def norm_sq(self) -> float:
        return sum(abs(c) ** 2 for c in self.coeffs.values())

    def cleaned(self) -> "StateVector":
        return StateVector({k: v for k, v in self.coeffs.items() if v != 0.0})


@dataclass(frozen=True)
class LatticeOperator:
    rule: Callable[[BasisIndex], list[tuple[BasisIndex, complex]]]
    name: str = ""

    def apply_basis(self, idx: BasisIndex) -> StateVector:
        out: dict[BasisIndex, complex] = {}
        for target, coeff in self.rule(idx):
            if target[0] < 0:
                raise ValueError(f"operator {self.name} emitted n < 0")
            out[target] = out.get(target, 0.0) + coeff
        return StateVector(out).cleaned()

    def apply(self, state: StateVector) -> StateVector:
        out: dict[BasisIndex, complex] = {}
        for idx, c in state.coeffs.items():
            for target, coeff in self.rule(idx):
                out[target] = out.get(target, 0.0) + c * coeff
        return StateVector(out).cleaned()

    def __matmul__(self, other: "LatticeOperator") -> "LatticeOperator":
        def rule(idx):
            items = []
            for mid, c1 in other.rule(idx):
                for target, c2 in self.rule(mid):
                    items.append((target, c1 * c2))
            return items

        return LatticeOperator(rule, name=f"({self.name} {other.name})")

    def __add__(self, other: "LatticeOperator") -> "LatticeOperator":
        return LatticeOperator(
            lambda idx: self.rule(idx) + other.rule(idx),
            name=f"({self.name} + {other.name})",
        )

    def __sub__(self, other: "LatticeOperator") -> "LatticeOperator":
        return LatticeOperator(
            lambda idx: self.rule(idx)
            + [(t, -c) for t, c in other.rule(idx)],
            name=f"({self.name} - {other.name})",
        )

    def __rmul__(self, scalar: complex) -> "LatticeOperator":
        return LatticeOperator(
            lambda idx: [(t, scalar * c) for t, c in self.rule(idx)],
            name=f"({scalar}*{self.name})",
        )


def q_action(which: int, hbar: float) -> LatticeOperator:
    """Diagonal quantized action: n*hbar (which=1) or m*hbar (which=2)."""
    if which not in (1, 2):
        raise ValueError("which must be 1 or 2")
    if hbar <= 0.0:
        raise ValueError("hbar must be positive")

    def rule(idx):
        n, m = idx
        return [(idx, (n if which == 1 else m) * hbar)]

    return LatticeOperator(rule, name=f"Q_A{which}")


def shift(which: int) -> LatticeOperator:
    """Lowering maps: a1 kills the n = 0 row, a2 shifts m down unboundedly."""
    if which == 1:

        def rule(idx):
            n, m = idx
            return [((n - 1, m), 1.0)] if n >= 1 else []

        return LatticeOperator(rule, name="a1")

    def rule(idx):
        n, m = idx
        return [((n, m - 1), 1.0)]

    return LatticeOperator(rule, name="a2")


def raise_(which: int) -> LatticeOperator:
    """Adjoints of the lowering maps."""
    if which == 1:
        return LatticeOperator(lambda idx: [((idx[0] + 1, idx[1]), 1.0)], name="a1+")
    return LatticeOperator(lambda idx: [((idx[0], idx[1] + 1), 1.0)], name="a2+")


def q_diagonal(
    f: Callable[[float, float], complex],
    spectrum: list[SpectrumPoint],
    hbar: float,
) -> LatticeOperator:
    """Diagonal operator sigma_(n,m) -> f(h_m(n), m*hbar) sigma_(n,m)."""
    table = {(p.qn.n, p.qn.m): (p.h, p.l) for p in spectrum}

    def rule(idx):
        if idx not in table:
            raise MissingPoint(f"(n={idx[0]}, m={idx[1]}) outside the spectrum window")
        h, l = table[idx]
        return [(idx, f(h, l))]

    return LatticeOperator(rule, name="Q_f")


def commutator(a: LatticeOperator, b: LatticeOperator) -> LatticeOperator:
    return LatticeOperator(
        (a @ b - b @ a).rule, name=f"[{a.name},{b.name}]"
    )


def _same_action(
    a: LatticeOperator, b: LatticeOperator, idx: BasisIndex, scale: float
) -> bool:
    va = a.apply_basis(idx).coeffs
    vb = b.apply_basis(idx).coeffs
    keys = set(va) | set(vb)
    return all(
        abs(va.get(k, 0.0) - vb.get(k, 0.0)) <= COEFF_TOL * max(1.0, scale)
        for k in keys
    )


def verify_relations(hbar: float, n_max: int, m_max: int) -> list[str]:
    """Exact check of the ladder/action commutation relations on a window.

    Checks [Q_Aj, ak] = -hbar ak delta_jk, [Q_Aj, ak+] = +hbar ak+ delta_jk,
    [aj, ak] = 0, [aj+, ak+] = 0, the n = 0 annihilation rule and the adjoint
    pairing <a+ s, t> = <s, a t>.  Returns violation messages, empty when all
    hold.
    """
    qa = {1: q_action(1, hbar), 2: q_action(2, hbar)}
    low = {1: shift(1), 2: shift(2)}
    up = {1: raise_(1), 2: raise_(2)}
    zero = LatticeOperator(lambda idx: [], name="0")
    violations: list[str] = []
    indices = [
        (n, m) for n in range(n_max + 1) for m in range(-m_max, m_max + 1)
    ]
    scale = hbar * max(n_max, m_max, 1)

    for j in (1, 2):
        for k in (1, 2):
            delta = 1.0 if j == k else 0.0
            lhs = commutator(qa[j], low[k])
            rhs = (-hbar * delta) * low[k]
            lhs_up = commutator(qa[j], up[k])
            rhs_up = (hbar * delta) * up[k]
            comm_low = commutator(low[j], low[k])
            comm_up = commutator(up[j], up[k])
            for idx in indices:
                if not _same_action(lhs, rhs, idx, scale):
                    violations.append(f"[Q_A{j}, a{k}] != -hbar*delta at {idx}")
                if not _same_action(lhs_up, rhs_up, idx, scale):
                    violations.append(f"[Q_A{j}, a{k}+] != +hbar*delta at {idx}")
                if not _same_action(comm_low, zero, idx, scale):
                    violations.append(f"[a{j}, a{k}] != 0 at {idx}")
                if not _same_action(comm_up, zero, idx, scale):
                    violations.append(f"[a{j}+, a{k}+] != 0 at {idx}")

    for n, m in indices:
        if low[1].apply_basis((0, m)).coeffs:
            violations.append(f"a1 does not annihilate (0, {m})")
        sig = StateVector.basis(n, m)
        for k in (1, 2):
            raised = up[k].apply_basis((n, m))
            for target in raised.coeffs:
                tau = StateVector.basis(*target)
                lhs = raised.inner(tau)
                rhs = sig.inner(low[k].apply(tau))
                if abs(lhs - rhs) > COEFF_TOL:
                    violations.append(f"adjoint pairing broken for a{k} at {(n, m)}")
    return violations

"""Shared domain types, unit conventions, and dissociation thresholds.

Everything internal is in natural units: m = hbar = e^2 = 1, so energies come
in units of m e^4 / hbar^2 (~27.211 eV) and lengths in Bohr radii.  An
infinitely massive particle is encoded by inverse mass 0, which keeps every
formula finite and branch-free.
"""

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

HARTREE_EV = 27.211

NATURAL = "natural"      # scalar 0+ sector
UNNATURAL = "unnatural"  # vector 1+ sector (threshold is the 2p atom)


@dataclass(frozen=True)
class SystemSpec:
    """One Hamiltonian instance: charges, inverse masses, exchange symmetry, sector.

    Three-body systems carry a central charge ``z_central`` and inverse masses
    ``[1/M, 1/m1, 1/m2]`` (center first).  Four-body systems have no center;
    ``charges`` lists the per-particle signed charges and ``inv_masses`` one
    entry per particle.
    """

    inv_masses: Tuple[float, ...]
    z_central: Optional[float] = None
    epsilon: int = +1
    sector: str = NATURAL
    charges: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if any(im < 0 for im in self.inv_masses):
            raise ValueError("inverse masses must be >= 0")
        if self.epsilon not in (+1, -1):
            raise ValueError("epsilon must be +1 or -1")
        if self.sector not in (NATURAL, UNNATURAL):
            raise ValueError(f"unknown sector {self.sector!r}")
        if self.z_central is None:
            if self.charges is None or len(self.charges) != 4:
                raise ValueError("four-body spec needs 4 charges")
            if len(self.inv_masses) != 4:
                raise ValueError("four-body spec needs 4 inverse masses")
            if abs(sum(self.charges)) > 1e-12:
                raise ValueError("four-body spec must be neutral")
            if sorted(self.charges) != [-1, -1, 1, 1]:
                raise ValueError("need exactly two +1 and two -1 charges")
        else:
            if len(self.inv_masses) != 3:
                raise ValueError("three-body spec needs [1/M, 1/m1, 1/m2]")

    @property
    def is_four_body(self) -> bool:
        return self.z_central is None


@dataclass(frozen=True)
class ExpTerm3:
    """One exponential basis term exp(-a*r2 - b*r1 - c*r12) for three bodies.

    Negative single entries are allowed (and useful); only the pairwise sums
    have to stay positive for the integrals to converge.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a + self.b <= 0 or self.b + self.c <= 0 or self.c + self.a <= 0:
            raise ValueError(f"non-positive pair sum in {self!r}")

    def as_tuple(self):
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class ExpTerm4:
    """Exponential term exp(-a*r13 - b*r14 - c*r23 - d*r24) for four bodies."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        # all six pair sums that appear in denominators / log arguments
        s = (self.a + self.c, self.b + self.d, self.a + self.b,
             self.c + self.d, self.a + self.d, self.b + self.c)
        if min(s) <= 0:
            raise ValueError(f"non-positive pair sum in {self!r}")

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class MatBlock:
    """Overlap/kinetic/potential matrices over one basis."""

    n_mat: "object"
    t_mat: "object"
    v_mat: "object"


@dataclass(frozen=True)
class TwoBodyThreshold:
    mu: float
    e_ground: float
    e_2p: float
    label: str

    def e_relevant(self, sector: str) -> float:
        return self.e_2p if sector == UNNATURAL else self.e_ground


@dataclass
class VariationalResult:
    energy: float
    params: Sequence[float]
    coeffs: Sequence[float]
    virial_ratio: float
    threshold: TwoBodyThreshold
    margin: float
    stable: bool
    sector: str = NATURAL
    meta: dict = field(default_factory=dict)


# energy must undercut the threshold by more than this to count as bound;
# guards against declaring round-off noise a bound state
STABILITY_TOL = 1e-6


def threshold_for(spec: SystemSpec) -> TwoBodyThreshold:
    """Lowest dissociation threshold of the spec, with its channel label.

    Three body: the central charge keeps the electron with which it forms the
    most strongly bound two-body atom; the other particle escapes to rest.
    Four body: both ways of splitting into two neutral atoms are evaluated and
    the lower sum wins.
    """
    if not spec.is_four_body:
        z = spec.z_central
        im0 = spec.inv_masses[0]
        mus = [1.0 / (im0 + imi) for imi in spec.inv_masses[1:]]
        mu = max(mus)
        e0 = -0.5 * z * z * mu
        label = f"(Z={z:g}) atom + free particle"
        return TwoBodyThreshold(mu=mu, e_ground=e0, e_2p=e0 / 4.0, label=label)

    # four-body: particles are ordered (+, +, -, -) by convention
    im = spec.inv_masses
    pos = [i for i, q in enumerate(spec.charges) if q > 0]
    neg = [i for i, q in enumerate(spec.charges) if q < 0]

    def atoms(p0, n0, p1, n1):
        mu_a = 1.0 / (im[p0] + im[n0])
        mu_b = 1.0 / (im[p1] + im[n1])
        return -0.5 * mu_a - 0.5 * mu_b, mu_a

    e_a, mu_a = atoms(pos[0], neg[0], pos[1], neg[1])
    e_b, mu_b = atoms(pos[0], neg[1], pos[1], neg[0])
    if e_a <= e_b:
        e0, mu, lab = e_a, mu_a, f"atoms ({pos[0]+1}{neg[0]+1})({pos[1]+1}{neg[1]+1})"
    else:
        e0, mu, lab = e_b, mu_b, f"atoms ({pos[0]+1}{neg[1]+1})({pos[1]+1}{neg[0]+1})"
    return TwoBodyThreshold(mu=mu, e_ground=e0, e_2p=e0 / 4.0, label=lab)


def natural_to_ev(e: float) -> float:
    return e * HARTREE_EV


def hminus_spec(z: float = 1.0, mass_ratio: float = float("inf"),
                epsilon: int = +1, sector: str = NATURAL) -> SystemSpec:
    """Convenience constructor: (Z, e-, e-) with central mass M = mass_ratio * m."""
    im0 = 0.0 if mass_ratio == float("inf") else 1.0 / mass_ratio
    return SystemSpec(inv_masses=(im0, 1.0, 1.0), z_central=z,
                      epsilon=epsilon, sector=sector)


def ps2_spec() -> SystemSpec:
    """Positronium molecule: (e+, e+, e-, e-), all masses 1."""
    return SystemSpec(inv_masses=(1.0, 1.0, 1.0, 1.0), z_central=None,
                      charges=(1.0, 1.0, -1.0, -1.0))

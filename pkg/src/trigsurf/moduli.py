"""Dimension counts for components of the moduli space of minimal surfaces in 4-tori.

Each gonal or hyperelliptic component is counted as

    locus_dim + bundle_choice_dim + 2 h0(L) + 2 h0(K - L) - 1

where ``h0(K - L)`` comes from Riemann-Roch, ``g - deg L + h0(L) - 1``.
"""

from dataclasses import dataclass, field

from .errors import RangeViolation

KINDS = ("holomorphic", "hyperelliptic", "trigonal", "d_gonal")


def brill_noether(g, r, d):
    """``rho = g - (r + 1)(g - d + r)``; requires ``r >= d - g``."""
    g, r, d = int(g), int(r), int(d)
    if r < d - g:
        raise RangeViolation(f"brill_noether requires r >= d - g (r={r}, d-g={d - g})")
    return g - (r + 1) * (g - d + r)


@dataclass(frozen=True)
class ComponentSpec:
    """A component kind with its genus and, where needed, ``r`` or ``d``."""

    kind: str
    g: int
    r: int = None
    d: int = None

    def __post_init__(self):
        kind, g = self.kind, self.g
        if kind not in KINDS:
            raise RangeViolation(f"unknown component kind {kind!r}; expected one of {KINDS}")
        if g < 2:
            raise RangeViolation("genus must be at least 2")
        if kind == "hyperelliptic":
            if self.r is None:
                raise RangeViolation("hyperelliptic requires r")
            if not 0 <= 2 * self.r <= g - 1:
                raise RangeViolation("hyperelliptic requires 0 <= 2r <= g - 1")
        elif kind == "trigonal":
            if g < 4:
                raise RangeViolation("trigonal requires g >= 4")
        elif kind == "d_gonal":
            if self.d is None:
                raise RangeViolation("d-gonal requires d")
            if self.d < 2:
                raise RangeViolation("d-gonal requires d >= 2")
            if not g > 2 * (self.d - 1):
                raise RangeViolation("d-gonal requires g > 2(d-1)")

    def to_json(self):
        out = {"kind": self.kind, "g": self.g}
        if self.r is not None:
            out["r"] = self.r
        if self.d is not None:
            out["d"] = self.d
        return out

    @classmethod
    def from_json(cls, obj):
        return cls(obj["kind"], int(obj["g"]), obj.get("r"), obj.get("d"))


def gonal_locus_dimension(kind, g, d=None):
    """Dimension of the locus of curves carrying the relevant linear series."""
    if kind == "hyperelliptic":
        if g < 2:
            raise RangeViolation("genus must be at least 2")
        return 2 * g - 1
    if kind == "trigonal":
        ComponentSpec("trigonal", g)
        return 2 * g + 1
    if kind == "d_gonal":
        ComponentSpec("d_gonal", g, d=d)
        return 2 * d + 2 * g - 5
    raise RangeViolation(f"no gonal locus for kind {kind!r}")


@dataclass(frozen=True)
class DimensionReport:
    spec: ComponentSpec
    locus_dim: int
    section_terms: int
    total: int
    terms: dict = field(default_factory=dict)
    formula_trace: str = ""
    count: object = None

    def to_json(self):
        out = {"spec": self.spec.to_json(), "locus_dim": self.locus_dim,
               "section_terms": self.section_terms, "total": self.total,
               "terms": dict(self.terms), "formula_trace": self.formula_trace}
        if self.count is not None:
            out["count"] = self.count
        return out


def _line_bundle(spec):
    """``(deg L, h0(L))`` for the series that defines the component."""
    g = spec.g
    if spec.kind == "hyperelliptic":
        # L = r g^1_2 on a hyperelliptic curve
        return 2 * spec.r, spec.r + 1
    if spec.kind == "trigonal":
        return 3, 2
    return spec.d, 2


def component_dimension(spec):
    """Complex dimension of the component described by ``spec``.

    The holomorphic component has dimension ``5g - 2``; every other kind
    is traced summand by summand and totals ``4g``.
    """
    g = spec.g
    if spec.kind == "holomorphic":
        total = 5 * g - 2
        return DimensionReport(spec, total, 0, total, {"total": total}, f"5g-2 = {total}")
    locus = gonal_locus_dimension(spec.kind, g, spec.d)
    deg, h0_l = _line_bundle(spec)
    h0_kl = g - deg + h0_l - 1
    bundle_choice = 0
    section = bundle_choice + 2 * h0_l + 2 * h0_kl - 1
    total = locus + section
    terms = {"locus_dim": locus, "bundle_choice_dim": bundle_choice, "h0_L": h0_l,
             "deg_L": deg, "h0_K_minus_L": h0_kl}
    trace = (f"{locus} + {bundle_choice} + 2*{h0_l} + 2*{h0_kl} - 1 = {total}"
             f"  [h0(K-L) = g - deg L + h0(L) - 1 = {g} - {deg} + {h0_l} - 1]")
    count = "unknown" if spec.kind == "trigonal" and g == 4 else None
    return DimensionReport(spec, locus, section, total, terms, trace, count)

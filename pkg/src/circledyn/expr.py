"""Expression trees for orientation-preserving homeomorphisms of the line.

Every node denotes a strictly increasing bijection of its domain (all of R
unless noted otherwise).  Trees are immutable after construction and
evaluation is pure, so expressions can be shared freely across threads.

The primitive chart used by the cell operators is

    hbar(x) = arctan(x)/pi + 1/2,

a homeomorphism from R onto (0, 1), with inverse tan(pi*(y - 1/2)).
"""

from __future__ import annotations

import bisect
import math
from fractions import Fraction

from .errors import DomainError, PrecisionError

DEFAULT_EPS = 1e-12

# Width of the guard band inside (0, 1) where the inverse chart blows up.
BOUNDARY_DELTA = 1e-15

BISECT_MAX_ITER = 200

_NODE_REGISTRY: dict[str, type["HomeoExpr"]] = {}


def _register(cls):
    _NODE_REGISTRY[cls.kind] = cls
    return cls


def _num(value):
    """Accept int, Fraction, or float parameters; keep exact types exact."""
    if isinstance(value, (int, Fraction)):
        return value
    return float(value)


def _num_to_jsonable(value):
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    return value


def _num_from_jsonable(value):
    if isinstance(value, dict):
        return Fraction(value["num"], value["den"])
    if isinstance(value, float) and value.is_integer() and abs(value) < 2**53:
        return value
    return value


class HomeoExpr:
    """Base class for homeomorphism expression nodes."""

    __slots__ = ()
    kind = "abstract"

    #: True when evaluating this node needs iterative refinement (so the
    #: requested eps actually drives work, rather than being met for free
    #: by closed-form float evaluation).
    approximate = False

    def __call__(self, x, eps: float = DEFAULT_EPS) -> float:
        return evaluate(self, x, eps)

    def _eval(self, x: float, eps: float) -> float:
        raise NotImplementedError

    def structural_inverse(self):
        """Closed-form inverse expression, or None if bisection is needed."""
        return None

    def payload(self) -> dict:
        return {}

    def children(self) -> tuple:
        return ()

    def _key(self):
        return (self.kind, tuple(sorted(self.payload().items(), key=lambda kv: kv[0])),
                self.children())

    def __eq__(self, other):
        if not isinstance(other, HomeoExpr):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        parts = [f"{k}={v!r}" for k, v in self.payload().items()]
        parts += [repr(c) for c in self.children()]
        return f"{type(self).__name__}({', '.join(parts)})"


def evaluate(h: HomeoExpr, x, eps: float = DEFAULT_EPS) -> float:
    """Evaluate h at x with requested absolute accuracy eps.

    Raises DomainError if x is outside the domain of h and PrecisionError
    if the requested accuracy is unattainable (inverse bisection budget,
    or arguments inside the chart guard band).
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"non-finite evaluation point {x!r}")
    return h._eval(x, eps)


def _hbar(x: float) -> float:
    return math.atan(x) / math.pi + 0.5


def _hbar_inv(y: float, eps: float) -> float:
    if y <= 0.0 or y >= 1.0:
        raise DomainError(f"inverse chart needs an argument in (0, 1); got {y!r}")
    if y < BOUNDARY_DELTA or y > 1.0 - BOUNDARY_DELTA:
        # Clamping to the guard band would move the output by roughly
        # derivative * |shift|; fail loudly unless that is below eps.
        yc = min(max(y, BOUNDARY_DELTA), 1.0 - BOUNDARY_DELTA)
        t = math.tan(math.pi * (yc - 0.5))
        drift = math.pi * (1.0 + t * t) * abs(yc - y)
        if drift > eps:
            raise PrecisionError(
                f"argument {y!r} is within {BOUNDARY_DELTA} of the chart boundary")
        return t
    return math.tan(math.pi * (y - 0.5))


@_register
class Identity(HomeoExpr):
    """The identity map of R."""

    __slots__ = ()
    kind = "identity"

    def _eval(self, x, eps):
        return x

    def structural_inverse(self):
        return self

    @classmethod
    def _from_payload(cls, payload, children):
        return cls()


@_register
class Translate(HomeoExpr):
    """x -> x + a.  The amount may be an int, Fraction, or float; exact
    amounts keep lift normalization exact."""

    __slots__ = ("amount", "_af")
    kind = "translate"

    def __init__(self, amount):
        self.amount = _num(amount)
        self._af = float(self.amount)

    def _eval(self, x, eps):
        return x + self._af

    def structural_inverse(self):
        return Translate(-self.amount)

    def payload(self):
        return {"amount": self.amount}

    @classmethod
    def _from_payload(cls, payload, children):
        return cls(_num_from_jsonable(payload["amount"]))


@_register
class Affine(HomeoExpr):
    """x -> a*x + b with a > 0."""

    __slots__ = ("scale", "offset", "_sf", "_of")
    kind = "affine"

    def __init__(self, scale, offset):
        scale = _num(scale)
        if not float(scale) > 0.0:
            raise ValueError("affine scale must be positive")
        self.scale = scale
        self.offset = _num(offset)
        self._sf = float(scale)
        self._of = float(self.offset)

    def _eval(self, x, eps):
        return self._sf * x + self._of

    def structural_inverse(self):
        if isinstance(self.scale, (int, Fraction)) and isinstance(self.offset, (int, Fraction)):
            inv_scale = Fraction(1, 1) / Fraction(self.scale)
            return Affine(inv_scale, -Fraction(self.offset) * inv_scale)
        return Affine(1.0 / self._sf, -self._of / self._sf)

    def payload(self):
        return {"scale": self.scale, "offset": self.offset}

    @classmethod
    def _from_payload(cls, payload, children):
        return cls(_num_from_jsonable(payload["scale"]),
                   _num_from_jsonable(payload["offset"]))


@_register
class HBar(HomeoExpr):
    """The chart hbar(x) = arctan(x)/pi + 1/2 from R onto (0, 1)."""

    __slots__ = ()
    kind = "hbar"

    def _eval(self, x, eps):
        return _hbar(x)

    def structural_inverse(self):
        return HBarInv()

    @classmethod
    def _from_payload(cls, payload, children):
        return cls()


@_register
class HBarInv(HomeoExpr):
    """Inverse chart y -> tan(pi*(y - 1/2)) on (0, 1)."""

    __slots__ = ()
    kind = "hbar_inv"

    def _eval(self, x, eps):
        return _hbar_inv(x, eps)

    def structural_inverse(self):
        return HBar()

    @classmethod
    def _from_payload(cls, payload, children):
        return cls()


#: Finest accuracy certifiable for cell transplants whose argument falls in
#: the chart guard band (the clamp moves the value by O(delta * slope)).
HAT_CLAMP_TOL = 1e-13


def _cell_core(inner: HomeoExpr, t: float, eps: float) -> float:
    # Transplant of inner through the chart: hbar(inner(hbar^{-1}(t))).
    # hbar is a contraction (derivative <= 1/pi), so inner's error shrinks.
    # Unlike bare HBarInv, wall-adjacent arguments are clamped into the safe
    # band: the transplant's displacement vanishes at the walls, so the
    # clamp shifts the value by far less than any eps above HAT_CLAMP_TOL.
    if t < BOUNDARY_DELTA or t > 1.0 - BOUNDARY_DELTA:
        if eps < HAT_CLAMP_TOL:
            raise PrecisionError(
                f"cell argument {t!r} is in the chart guard band; cannot "
                f"certify accuracy {eps!r}")
        t = min(max(t, BOUNDARY_DELTA), 1.0 - BOUNDARY_DELTA)
    u = _hbar_inv(t, eps)
    w = evaluate(inner, u, eps * 0.5)
    return _hbar(w)


@_register
class UnitCellHat(HomeoExpr):
    """Transplants inner onto each open unit cell (i, i+1); fixes integers.

    On (i, i+1):  x -> hbar(inner(hbar^{-1}(x - i))) + i.
    """

    __slots__ = ("inner", "approximate")
    kind = "unit_cell_hat"

    def __init__(self, inner: HomeoExpr):
        self.inner = inner
        self.approximate = inner.approximate

    def _eval(self, x, eps):
        i = math.floor(x)
        if x == i:
            return x
        return i + _cell_core(self.inner, x - i, eps)

    def structural_inverse(self):
        return UnitCellHat(inverse(self.inner))

    def children(self):
        return (self.inner,)

    @classmethod
    def _from_payload(cls, payload, children):
        (inner,) = children
        return cls(inner)


@_register
class ArcHat(HomeoExpr):
    """Transplants inner onto the cells (lo + m, hi + m) for every integer m,
    through the chart scaled to the cell; identity everywhere else.

    Requires 0 < hi - lo <= 1 so the cell family is disjoint and the map
    commutes with the unit translation.  ArcHat(inner, 0, 1) coincides with
    UnitCellHat(inner).
    """

    __slots__ = ("inner", "lo", "hi", "_len", "approximate")
    kind = "arc_hat"

    def __init__(self, inner: HomeoExpr, lo: float, hi: float):
        lo = float(lo)
        hi = float(hi)
        if not 0.0 < hi - lo <= 1.0:
            raise ValueError("arc length must lie in (0, 1]")
        self.inner = inner
        self.lo = lo
        self.hi = hi
        self._len = hi - lo
        self.approximate = inner.approximate

    def _eval(self, x, eps):
        m = math.floor(x - self.lo)
        t = x - self.lo - m
        u = t / self._len
        if u <= 0.0 or u >= 1.0:
            return x
        v = _cell_core(self.inner, u, eps / max(self._len, 1e-300))
        return self.lo + m + v * self._len

    def structural_inverse(self):
        return ArcHat(inverse(self.inner), self.lo, self.hi)

    def children(self):
        return (self.inner,)

    def payload(self):
        return {"lo": self.lo, "hi": self.hi}

    @classmethod
    def _from_payload(cls, payload, children):
        (inner,) = children
        return cls(inner, payload["lo"], payload["hi"])


def _pchip_interior(h0, h1, d0, d1):
    # Fritsch-Carlson weighted harmonic mean; positive for increasing data.
    if d0 <= 0.0 or d1 <= 0.0:
        return 0.0
    w1 = 2.0 * h1 + h0
    w2 = h1 + 2.0 * h0
    return (w1 + w2) / (w1 / d0 + w2 / d1)


def _pchip_endpoint(h0, h1, d0, d1):
    t = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1)
    if t * d0 <= 0.0:
        return 0.0
    if d0 * d1 < 0.0 and abs(t) > 3.0 * abs(d0):
        return 3.0 * d0
    return t


def _hermite(y0, y1, d0, d1, h, s):
    s2 = s * s
    s3 = s2 * s
    return (y0 * (2.0 * s3 - 3.0 * s2 + 1.0)
            + h * d0 * (s3 - 2.0 * s2 + s)
            + y1 * (-2.0 * s3 + 3.0 * s2)
            + h * d1 * (s3 - s2))


@_register
class PiecewiseMonotone(HomeoExpr):
    """Monotone interpolant through strictly increasing breakpoints.

    interpolation: "cubic" (Fritsch-Carlson monotone cubic, the default) or
    "linear".

    extension: how the table extends to all of R.
      "linear"   - continue with the end-segment secant slopes.
      "periodic" - the map commutes with the unit translation; the table
                   must span less than one period in both coordinates and
                   is closed by the wrap segment to (xs[0]+1, ys[0]+1).
    """

    __slots__ = ("xs", "ys", "interpolation", "extension",
                 "_tangents", "_lo_slope", "_hi_slope")
    kind = "piecewise_monotone"

    def __init__(self, xs, ys, interpolation="cubic", extension="linear"):
        xs = tuple(float(v) for v in xs)
        ys = tuple(float(v) for v in ys)
        if len(xs) != len(ys) or len(xs) < 2:
            raise ValueError("need at least two breakpoints")
        for a, b in zip(xs, xs[1:]):
            if not b > a:
                raise ValueError("breakpoint x values must be strictly increasing")
        for a, b in zip(ys, ys[1:]):
            if not b > a:
                raise ValueError("breakpoint y values must be strictly increasing")
        if interpolation not in ("cubic", "linear"):
            raise ValueError(f"unknown interpolation {interpolation!r}")
        if extension not in ("linear", "periodic"):
            raise ValueError(f"unknown extension {extension!r}")
        if extension == "periodic":
            if not (xs[-1] - xs[0] < 1.0 and ys[-1] - ys[0] < 1.0):
                raise ValueError("periodic table must span less than one period")
        self.xs = xs
        self.ys = ys
        self.interpolation = interpolation
        self.extension = extension
        self._tangents = self._compute_tangents() if interpolation == "cubic" else None
        self._lo_slope = (ys[1] - ys[0]) / (xs[1] - xs[0])
        self._hi_slope = (ys[-1] - ys[-2]) / (xs[-1] - xs[-2])

    def _compute_tangents(self):
        xs, ys = self.xs, self.ys
        n = len(xs)
        gaps = [xs[i + 1] - xs[i] for i in range(n - 1)]
        secs = [(ys[i + 1] - ys[i]) / gaps[i] for i in range(n - 1)]
        if self.extension == "periodic":
            # Close the cycle through the wrap segment; every knot is interior.
            wrap_gap = xs[0] + 1.0 - xs[-1]
            wrap_sec = (ys[0] + 1.0 - ys[-1]) / wrap_gap
            gaps = gaps + [wrap_gap]
            secs = secs + [wrap_sec]
            tangents = []
            for i in range(n):
                h0 = gaps[i - 1]
                d0 = secs[i - 1]
                tangents.append(_pchip_interior(h0, gaps[i], d0, secs[i]))
            return tuple(tangents)
        tangents = [0.0] * n
        tangents[0] = _pchip_endpoint(gaps[0], gaps[1] if n > 2 else gaps[0],
                                      secs[0], secs[1] if n > 2 else secs[0])
        tangents[-1] = _pchip_endpoint(gaps[-1], gaps[-2] if n > 2 else gaps[-1],
                                       secs[-1], secs[-2] if n > 2 else secs[-1])
        for i in range(1, n - 1):
            tangents[i] = _pchip_interior(gaps[i - 1], gaps[i], secs[i - 1], secs[i])
        return tuple(tangents)

    def _segment_value(self, i, x):
        # Segment i runs from knot i to knot i+1; for the periodic wrap
        # segment i == len(xs)-1 and the right knot is (xs[0]+1, ys[0]+1).
        xs, ys = self.xs, self.ys
        if i == len(xs) - 1:
            x1, y1 = xs[0] + 1.0, ys[0] + 1.0
            d1 = self._tangents[0] if self._tangents else None
        else:
            x1, y1 = xs[i + 1], ys[i + 1]
            d1 = self._tangents[i + 1] if self._tangents else None
        x0, y0 = xs[i], ys[i]
        if self.interpolation == "linear":
            return y0 + (x - x0) * (y1 - y0) / (x1 - x0)
        h = x1 - x0
        return _hermite(y0, y1, self._tangents[i], d1, h, (x - x0) / h)

    def _eval(self, x, eps):
        xs, ys = self.xs, self.ys
        if self.extension == "periodic":
            m = math.floor(x - xs[0])
            t = x - m
            if t < xs[0]:
                m -= 1
                t = x - m
            elif t >= xs[0] + 1.0:
                m += 1
                t = x - m
            if t >= xs[-1]:
                return self._segment_value(len(xs) - 1, t) + m
            i = bisect.bisect_right(xs, t) - 1
            if i < 0:
                i = 0
            if t == xs[i]:
                return ys[i] + m
            return self._segment_value(i, t) + m
        if x <= xs[0]:
            return ys[0] + (x - xs[0]) * self._lo_slope
        if x >= xs[-1]:
            return ys[-1] + (x - xs[-1]) * self._hi_slope
        i = bisect.bisect_right(xs, x) - 1
        if x == xs[i]:
            return ys[i]
        return self._segment_value(i, x)

    def structural_inverse(self):
        if self.interpolation == "linear":
            return PiecewiseMonotone(self.ys, self.xs, "linear", self.extension)
        return None

    def payload(self):
        return {"xs": list(self.xs), "ys": list(self.ys),
                "interpolation": self.interpolation, "extension": self.extension}

    def _key(self):
        return (self.kind, self.xs, self.ys, self.interpolation, self.extension)

    @classmethod
    def _from_payload(cls, payload, children):
        return cls(payload["xs"], payload["ys"],
                   payload["interpolation"], payload["extension"])


@_register
class Compose(HomeoExpr):
    """Compose(left, right) denotes left after right: x -> left(right(x))."""

    __slots__ = ("left", "right", "approximate")
    kind = "compose"

    def __init__(self, left: HomeoExpr, right: HomeoExpr):
        self.left = left
        self.right = right
        self.approximate = left.approximate or right.approximate

    def _eval(self, x, eps):
        if not self.right.approximate:
            # Inner value is float-accurate; split the budget evenly.
            r = evaluate(self.right, x, eps * 0.5)
            return evaluate(self.left, r, eps * 0.5)
        r = evaluate(self.right, x, eps * 0.25)
        lip = _lipschitz_estimate(self.left, r, eps)
        inner_eps = eps * 0.5 / lip
        if inner_eps < eps * 0.25:
            r = evaluate(self.right, x, inner_eps)
        return evaluate(self.left, r, eps * 0.5)

    def structural_inverse(self):
        return Compose(inverse(self.right), inverse(self.left))

    def children(self):
        return (self.left, self.right)

    @classmethod
    def _from_payload(cls, payload, children):
        left, right = children
        return cls(left, right)


@_register
class Inverse(HomeoExpr):
    """Formal inverse; evaluated by monotone bisection when no closed form
    exists for the wrapped node."""

    __slots__ = ("inner", "_structural", "approximate")
    kind = "inverse"

    def __init__(self, inner: HomeoExpr):
        self.inner = inner
        self._structural = inner.structural_inverse()
        if self._structural is None:
            self.approximate = True
        else:
            self.approximate = self._structural.approximate

    def _eval(self, x, eps):
        if self._structural is not None:
            return evaluate(self._structural, x, eps)
        return _bisect_inverse(self.inner, x, eps)

    def structural_inverse(self):
        return self.inner

    def children(self):
        return (self.inner,)

    @classmethod
    def _from_payload(cls, payload, children):
        (inner,) = children
        return cls(inner)


def _lipschitz_estimate(h: HomeoExpr, x: float, eps: float) -> float:
    """Finite-difference slope estimate of h on a bracket around x,
    inflated by a safety factor of two."""
    step = max(1e-8, eps)
    coarse = max(eps * 0.25, 1e-14)
    lo = evaluate(h, x - step, coarse)
    hi = evaluate(h, x + step, coarse)
    return max((hi - lo) / (2.0 * step), 1e-12) * 2.0


def _bisect_inverse(h: HomeoExpr, y: float, eps: float) -> float:
    """Solve h(x) = y for increasing h: R -> R by bracketing bisection."""
    feval = eps * 1e-2
    lo, hi = y - 1.0, y + 1.0
    step = 1.0
    for _ in range(80):
        if evaluate(h, lo, feval) <= y:
            break
        step *= 2.0
        lo -= step
    else:
        raise PrecisionError("failed to bracket the inverse from below")
    step = 1.0
    for _ in range(80):
        if evaluate(h, hi, feval) >= y:
            break
        step *= 2.0
        hi += step
    else:
        raise PrecisionError("failed to bracket the inverse from above")
    for _ in range(BISECT_MAX_ITER):
        if hi - lo <= eps:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if evaluate(h, mid, feval) < y:
            lo = mid
        else:
            hi = mid
    raise PrecisionError(
        f"inverse bisection did not reach eps={eps!r} in {BISECT_MAX_ITER} steps")


def inverse(h: HomeoExpr) -> HomeoExpr:
    """Inverse expression: structural closed forms where they exist,
    a bisection-backed formal Inverse node otherwise."""
    s = h.structural_inverse()
    return s if s is not None else Inverse(h)


def power(h: HomeoExpr, k: int) -> HomeoExpr:
    """k-th compositional power, with closed forms for translation-like and
    cell-hat nodes (the hat operator is a homomorphism in its argument)."""
    if k == 0:
        return Identity()
    if k < 0:
        return power(inverse(h), -k)
    if isinstance(h, Identity):
        return h
    if isinstance(h, Translate):
        return Translate(h.amount * k)
    if isinstance(h, Affine):
        a, b = h.scale, h.offset
        if float(a) == 1.0:
            return Translate(b * k)
        scale = a ** k
        return Affine(scale, b * (scale - 1) / (a - 1))
    if isinstance(h, UnitCellHat):
        return UnitCellHat(power(h.inner, k))
    if isinstance(h, ArcHat):
        return ArcHat(power(h.inner, k), h.lo, h.hi)
    result = h
    for _ in range(k - 1):
        result = Compose(result, h)
    return result


def compose_all(exprs) -> HomeoExpr:
    """Left-to-right composition chain; Identity for an empty sequence."""
    exprs = [e for e in exprs if not isinstance(e, Identity)]
    if not exprs:
        return Identity()
    result = exprs[0]
    for e in exprs[1:]:
        result = Compose(result, e)
    return result


def expr_to_jsonable(h: HomeoExpr) -> dict:
    doc = {"kind": h.kind}
    payload = {k: _num_to_jsonable(v) for k, v in h.payload().items()}
    doc.update(payload)
    kids = h.children()
    if kids:
        doc["children"] = [expr_to_jsonable(c) for c in kids]
    return doc


def expr_from_jsonable(doc: dict) -> HomeoExpr:
    kind = doc.get("kind")
    cls = _NODE_REGISTRY.get(kind)
    if cls is None:
        raise ValueError(f"unknown expression node kind {kind!r}")
    children = tuple(expr_from_jsonable(c) for c in doc.get("children", ()))
    payload = {k: v for k, v in doc.items() if k not in ("kind", "children")}
    return cls._from_payload(payload, children)

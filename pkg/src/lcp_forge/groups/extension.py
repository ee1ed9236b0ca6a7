"""The similarity-ratio homomorphism ρ and the splitting Ω ≅ Ω′ ⋊ ℤ."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..admissibility.similarity import Ratio, _abs, _plain, exact_sqrt, similarity_ratio_squared
from ..admissibility.splitting import Splitting
from ..errors import InvalidInput, NoStrictSimilarity, Unsupported
from ..linalg.matrix import Matrix
from .automorphism import BundleAutomorphism
from .spec import GroupSpec, parse_token


def rho(f: BundleAutomorphism, splitting: Splitting) -> Ratio:
    """Similarity ratio of the linear part of f restricted to E^q."""
    return rho_linear(f.A, splitting)


def rho_linear(A: Matrix, splitting: Splitting) -> Ratio:
    R = splitting.restrict(A)
    G = splitting.scalar_product
    if R.nrows == 1:
        r = _abs(_plain(R[0, 0]))
        return Ratio(r * r, r)
    if all(R[i, j] == (R[0, 0] if i == j else 0) for i in range(R.nrows) for j in range(R.ncols)):
        r = _abs(_plain(R[0, 0]))
        return Ratio(r * r, r)
    c = _plain(similarity_ratio_squared(R, G))
    return Ratio(c, exact_sqrt(c))


def word_linear_part(word, spec: GroupSpec) -> Matrix:
    """Product of the linear parts along the word; ρ only sees this matrix."""
    A = Matrix.identity(spec.p)
    for tok in word:
        name, e = parse_token(tok)
        A = A @ spec.generator(name).A ** e
    return A


def rho_word(word, spec: GroupSpec) -> Ratio:
    return rho_linear(word_linear_part(word, spec), spec.splitting)


# -- Ω ≅ Ω′ ⋊ ℤ -----------------------------------------------------------

@dataclass
class SplitExtension:
    ratio_generator: Ratio
    exponents: dict            # generator name -> n with ρ(g) = λ^n
    section: list              # word with ρ = λ
    kernel: list               # words with ρ = 1 generating ker ρ
    verified: bool

    def to_json(self):
        return {"lambda": self.ratio_generator.to_json(), "exponents": self.exponents,
                "section": self.section, "kernel": self.kernel, "verified": self.verified}


def _power_exponent(r: Ratio, lam: Ratio, max_exp=64):
    """n with r = λ^n, found from a float estimate and confirmed exactly."""
    if r.is_one():
        return 0
    lr, ll = math.log(float(r)), math.log(float(lam))
    n = round(lr / ll)
    if n == 0 or abs(n) > max_exp or abs(lr - n * ll) > 1e-6 * max(1.0, abs(lr)):
        return None
    target = lam.squared ** n if n > 0 else (1 / lam.squared) ** (-n)
    return n if target == r.squared else None


def _word_power(name, k):
    return [] if k == 0 else [f"{name}^{k}"]


def split_extension(spec: GroupSpec, lam: Ratio | None = None) -> SplitExtension:
    if spec.splitting is None:
        raise InvalidInput("a splitting is required to compute ratios")
    ratios = {n: rho(g, spec.splitting) for n, g in spec.generators.items()}
    nontrivial = [n for n, r in ratios.items() if not r.is_one()]
    if not nontrivial:
        raise NoStrictSimilarity("every generator is an isometry on E^q")
    if lam is None:
        # smallest ratio above 1 among the generators and their inverses
        cands = []
        for n in nontrivial:
            r = ratios[n]
            cands.append(r if float(r) > 1 else r.inverse())
        lam = min(cands, key=float)
    exps = {}
    for n, r in ratios.items():
        e = _power_exponent(r, lam)
        if e is None:
            raise Unsupported(f"ρ({n}) is not an integer power of the chosen ratio generator")
        exps[n] = e
    g = 0
    for e in exps.values():
        g = math.gcd(g, e)
    if g != 1:
        raise InvalidInput("no generator maps onto the chosen ratio generator")
    names = list(spec.generators)
    unit = next((n for n in names if abs(exps[n]) == 1), None)
    if unit is not None:
        section = _word_power(unit, exps[unit])
    else:
        section = _bezout_word(names, exps)
    kernel = []
    for n in names:
        if n == unit:
            continue
        e = exps[n]
        kernel.append([n] if e == 0 else [n] + _repeat_inverse(section, e))
    ok = rho_word(section, spec) == lam and all(rho_word(w, spec).is_one() for w in kernel)
    return SplitExtension(lam, exps, section, kernel, ok)


def _repeat_inverse(word, k):
    """Word for (w)^{−k}."""
    inv = []
    for tok in reversed(word):
        name, e = parse_token(tok)
        inv.append(f"{name}^{-e}")
    fwd = list(word)
    if k > 0:
        return inv * k
    return fwd * (-k)


def _bezout_word(names, exps):
    coeffs = {n: 0 for n in names}
    g = 0
    for n in names:
        e = exps[n]
        if e == 0:
            continue
        if g == 0:
            g, coeffs[n] = abs(e), (1 if e > 0 else -1)
            continue
        # extended gcd step: new g = x g + y e
        x0, y0, a, b = 1, 0, g, e
        x1, y1 = 0, 1
        while b:
            qt = a // b
            a, b = b, a - qt * b
            x0, x1 = x1, x0 - qt * x1
            y0, y1 = y1, y0 - qt * y1
        if a < 0:
            a, x0, y0 = -a, -x0, -y0
        for k in coeffs:
            coeffs[k] *= x0
        coeffs[n] += y0
        g = a
    return [t for n in names for t in _word_power(n, coeffs[n])]

"""Law suites for both semantic models.

A law is a pair of matrices built at some internal bound. Both sides are
restricted to points whose multisets have size at most D and compared entry
by entry; the sides are then rebuilt two levels higher to check that the
restriction did not change.
"""

import json
import logging
import random
from collections.abc import Callable, Iterator
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .algebra import SemiringMode, format_scalar
from .errors import UnknownSuite
from .rel import Morphism, antiderivative_rel, rel_compose, rel_coderc, rel_derc, rel_J
from .webs import EMPTY_WEB, AtomWeb, Point, UnitWeb, Web, encode_point, excl, pair_web, with_bound
from .wrel import (
    I,
    J,
    WMorphism,
    coderc,
    coderc_pow,
    cocontr,
    compose,
    compose_all,
    contr,
    coweak,
    der,
    diag,
    digg,
    ftc_sides,
    identity,
    mu,
    poincare_antiderivative,
    psi,
    quasifunctor_pow,
    random_matrix,
    relabel,
    seely0,
    seely2,
    swap23,
    symmetry,
    taylor_T,
    tensor,
    w_excl,
    w_prom_vector,
    weak,
    zero,
)

logger = logging.getLogger(__name__)

RAT = SemiringMode.RAT
BOOL = SemiringMode.BOOL

MODEL_MODES = {"rel": BOOL, "wrel": RAT}

Sides = tuple[WMorphism, WMorphism]


@dataclass(frozen=True)
class Law:
    """``build(b)`` returns both sides at internal bound b = reach * D + headroom.

    ``reach`` is how many D-sized multisets an intermediate point may merge.
    Headroom 0 marks a law whose intermediate points are never larger than
    its source and target; it skips the stability check.
    """

    name: str
    build: Callable[[int], Sides]
    reach: int = 1
    headroom: int = 2


@dataclass
class LawResult:
    suite: str
    law: str
    model: str
    ok: bool
    counterexample: str = ""


def sample_web(size: int, name: str = "a") -> AtomWeb:
    return AtomWeb(name, tuple(f"{name}{i}" for i in range(size)))


def describe_difference(diff: tuple[tuple[Point, Point], Fraction, Fraction]) -> str:
    (a, b), left, right = diff
    return json.dumps({
        "row": encode_point(a),
        "col": encode_point(b),
        "lhs": format_scalar(left),
        "rhs": format_scalar(right),
    }, sort_keys=True)


def _restrict(m: WMorphism, degree: int) -> WMorphism:
    return m.restrict(with_bound(m.source, degree), with_bound(m.target, degree))


def check_law(law: Law, degree: int, stability: bool = True) -> str:
    """Empty string when the law holds, else a JSON counterexample."""
    bound = law.reach * degree + law.headroom
    lhs, rhs = (_restrict(m, degree) for m in law.build(bound))
    diff = lhs.first_difference(rhs)
    if diff is not None:
        return describe_difference(diff)
    if stability and law.headroom:
        logger.debug("stability check of %s at bound %d", law.name, bound + 2)
        wider = _restrict(law.build(bound + 2)[0], degree)
        diff = lhs.first_difference(wider)
        if diff is not None:
            return "unstable under truncation: " + describe_difference(diff)
    return ""


# Structural isomorphisms


def _unitor(w: Web, mode: SemiringMode) -> WMorphism:
    """1 ⊗ W → W"""
    return relabel(pair_web(UnitWeb(), w), w, lambda p: p[1], mode)


def _assoc(x: Web, y: Web, z: Web, mode: SemiringMode) -> WMorphism:
    """X ⊗ (Y ⊗ Z) → (X ⊗ Y) ⊗ Z"""
    return relabel(pair_web(x, pair_web(y, z)), pair_web(pair_web(x, y), z),
                   lambda p: ((p[0], p[1][0]), p[1][1]), mode)


def _middle_swap(a: Web, b: Web, c: Web, d: Web, mode: SemiringMode) -> WMorphism:
    """(A ⊗ B) ⊗ (C ⊗ D) → (A ⊗ C) ⊗ (B ⊗ D)"""
    return relabel(pair_web(pair_web(a, b), pair_web(c, d)), pair_web(pair_web(a, c), pair_web(b, d)),
                   lambda p: ((p[0][0], p[1][0]), (p[0][1], p[1][1])), mode)


def _diagonal(w: Web, keep: Callable[[Point], bool], mode: SemiringMode = RAT) -> WMorphism:
    return WMorphism(w, w, (((p, p), 1) for p in w.points if keep(p)), mode)


# Suites


def bialgebra_laws(x: Web, mode: SemiringMode, rng: random.Random, degree: int, samples: int) -> list[Law]:
    def ex(b: int) -> Web:
        return excl(x, b)

    def ident(b: int) -> WMorphism:
        return identity(ex(b), mode)

    return [
        Law("c is coassociative", lambda b: (
            compose(tensor(contr(x, b, mode), ident(b)), contr(x, b, mode)),
            compose_all(_assoc(ex(b), ex(b), ex(b), mode), tensor(ident(b), contr(x, b, mode)),
                        contr(x, b, mode)),
        )),
        Law("w is a counit of c", lambda b: (
            compose_all(_unitor(ex(b), mode), tensor(weak(x, b, mode), ident(b)), contr(x, b, mode)),
            ident(b),
        )),
        Law("c is cocommutative", lambda b: (
            compose(symmetry(ex(b), ex(b), mode), contr(x, b, mode)),
            contr(x, b, mode),
        )),
        Law("c̄ is associative", lambda b: (
            compose(cocontr(x, b, mode), tensor(cocontr(x, b, mode), ident(b))),
            compose_all(cocontr(x, b, mode), tensor(ident(b), cocontr(x, b, mode)),
                        _assoc(ex(b), ex(b), ex(b), mode).transpose()),
        )),
        Law("w̄ is a unit of c̄", lambda b: (
            compose_all(cocontr(x, b, mode), tensor(coweak(x, b, mode), ident(b)),
                        _unitor(ex(b), mode).transpose()),
            ident(b),
        )),
        Law("c̄ is commutative", lambda b: (
            compose(cocontr(x, b, mode), symmetry(ex(b), ex(b), mode)),
            cocontr(x, b, mode),
        )),
        Law("c ∘ c̄ = (c̄ ⊗ c̄) ∘ σ ∘ (c ⊗ c)", lambda b: (
            compose(contr(x, b, mode), cocontr(x, b, mode)),
            compose_all(tensor(cocontr(x, b, mode), cocontr(x, b, mode)),
                        _middle_swap(ex(b), ex(b), ex(b), ex(b), mode),
                        tensor(contr(x, b, mode), contr(x, b, mode))),
        ), reach=2),
        Law("w ∘ c̄ = w ⊗ w", lambda b: (
            compose(weak(x, b, mode), cocontr(x, b, mode)),
            compose(_unitor(UnitWeb(), mode), tensor(weak(x, b, mode), weak(x, b, mode))),
        ), reach=2),
        Law("c ∘ w̄ = w̄ ⊗ w̄", lambda b: (
            compose(contr(x, b, mode), coweak(x, b, mode)),
            compose(tensor(coweak(x, b, mode), coweak(x, b, mode)), _unitor(UnitWeb(), mode).transpose()),
        )),
        Law("w ∘ w̄ = Id", lambda b: (
            compose(weak(x, b, mode), coweak(x, b, mode)),
            identity(UnitWeb(), mode),
        )),
    ]


def _vector(w: Web, v: dict[Point, Fraction]) -> WMorphism:
    """A vector over w as a matrix from the unit."""
    return WMorphism(UnitWeb(), w, ((((), p), q) for p, q in v.items()))


def comonad_laws(x: Web, mode: SemiringMode, rng: random.Random, degree: int, samples: int) -> list[Law]:
    values = (1,) if mode is BOOL else (1, 2, -1, Fraction(1, 2))
    laws = [
        Law("der ∘ digg = Id", lambda b: (
            compose(der(excl(x, b), b, mode), digg(x, b, mode)),
            identity(excl(x, b), mode),
        ), headroom=0),
        Law("!der ∘ digg = Id", lambda b: (
            compose(w_excl(der(x, b, mode), b), digg(x, b, mode)),
            identity(excl(x, b), mode),
        ), headroom=0),
        Law("digg is coassociative", lambda b: (
            compose(digg(excl(x, b), b, mode), digg(x, b, mode)),
            compose(w_excl(digg(x, b, mode), b), digg(x, b, mode)),
        ), reach=max(degree, 1), headroom=0),
        Law("!Id = Id", lambda b: (w_excl(identity(x, mode), b), identity(excl(x, b), mode)), headroom=0),
    ]
    for i in range(samples):
        m = random_matrix(x, x, rng, values=values).with_mode(mode)
        n = random_matrix(x, x, rng, values=values).with_mode(mode)
        laws.append(Law(f"!(M ∘ N) = !M ∘ !N #{i}", lambda b, m=m, n=n: (
            w_excl(compose(m, n), b),
            compose(w_excl(m, b), w_excl(n, b)),
        ), headroom=0))
        if mode is RAT:
            v = {a: rng.choice(values) for a in x.points}
            laws.append(Law(f"Fun(!M)(x) = (M x)^! #{i}", lambda b, m=m, v=v: (
                _vector(excl(x, b), w_excl(m, b).apply(w_prom_vector(v, b))),
                _vector(excl(x, b), w_prom_vector(m.apply(v), b)),
            ), headroom=0))
    return laws


def seely_laws(x: Web, mode: SemiringMode, rng: random.Random, degree: int, samples: int) -> list[Law]:
    y = sample_web(len(x), "b")

    def s(b: int) -> WMorphism:
        return seely2(x, y, b, mode)

    def diag_xx(b: int) -> WMorphism:
        return w_excl(diag(x, mode), b)

    return [
        Law("seely2ᵀ ∘ seely2 = Id", lambda b: (
            compose(s(b).transpose(), s(b)),
            identity(pair_web(excl(x, b), excl(y, b)), mode),
        ), reach=2),
        Law("seely2 ∘ seely2ᵀ = Id", lambda b: (
            compose(s(b), s(b).transpose()),
            identity(s(b).target, mode),
        )),
        Law("seely0ᵀ ∘ seely0 = Id", lambda b: (
            compose(seely0(b, mode).transpose(), seely0(b, mode)),
            identity(UnitWeb(), mode),
        )),
        Law("c = seely2ᵀ ∘ !Δ", lambda b: (
            contr(x, b, mode),
            compose(seely2(x, x, b, mode).transpose(), diag_xx(b)),
        )),
        Law("w = seely0ᵀ ∘ !0", lambda b: (
            weak(x, b, mode),
            compose(seely0(b, mode).transpose(), w_excl(zero(x, EMPTY_WEB, mode), b)),
        )),
        Law("digg ∘ μ = !μ ∘ μ ∘ (digg ⊗ digg)", lambda b: (
            compose(digg(pair_web(x, y), b, mode), mu(x, y, b, mode)),
            compose_all(w_excl(mu(x, y, b, mode), b), mu(excl(x, b), excl(y, b), b, mode),
                        tensor(digg(x, b, mode), digg(y, b, mode))),
        ), headroom=0),
    ]


def leibniz_laws(x: Web, mode: SemiringMode, rng: random.Random, degree: int, samples: int) -> list[Law]:
    def rhs(b: int) -> WMorphism:
        ex = excl(x, b)
        right = compose(tensor(identity(ex, mode), coderc(x, b, mode)), _assoc(ex, ex, x, mode).transpose())
        left = compose(tensor(coderc(x, b, mode), identity(ex, mode)), swap23(ex, ex, x, mode))
        return compose(right + left, tensor(contr(x, b, mode), identity(x, mode)))

    return [
        Law("c ∘ ∂̄ = ((Id ⊗ ∂̄) + (∂̄ ⊗ Id) ∘ σ) ∘ (c ⊗ Id)", lambda b: (
            compose(contr(x, b, mode), coderc(x, b, mode)),
            rhs(b),
        )),
        Law("w ∘ ∂̄ = 0", lambda b: (
            compose(weak(x, b, mode), coderc(x, b, mode)),
            zero(pair_web(excl(x, b), x), UnitWeb(), mode),
        )),
    ]


def schwarz_laws(x: Web, mode: SemiringMode, rng: random.Random, degree: int, samples: int) -> list[Law]:
    def twice(b: int) -> WMorphism:
        return compose(coderc(x, b, mode), tensor(coderc(x, b, mode), identity(x, mode)))

    return [
        Law("∂̄ ∘ (∂̄ ⊗ Id) ∘ σ₂₃ = ∂̄ ∘ (∂̄ ⊗ Id)", lambda b: (
            compose(twice(b), swap23(excl(x, b), x, x, mode)),
            twice(b),
        )),
    ]


def _random_polynomial(x: Web, y: Web, degree: int, rng: random.Random) -> dict:
    source = excl(x, degree)
    return {
        (m, q): rng.choice((1, 2, -1, Fraction(1, 3)))
        for m in source.points
        for q in y.points
        if rng.random() < 0.6
    }


def taylor_laws(x: Web, mode: SemiringMode, rng: random.Random, degree: int, samples: int) -> list[Law]:
    top = min(3, degree)
    laws = [
        Law(f"T{n} ∘ ∂̄ = ∂̄ ∘ (T{n - 1} ⊗ Id)", lambda b, n=n: (
            compose(taylor_T(x, n, b), coderc(x, b)),
            compose(coderc(x, b), tensor(taylor_T(x, n - 1, b), identity(x))),
        ))
        for n in range(1, top + 1)
    ]
    laws += [
        Law(f"T{n} projects on sizes ≤ {n}", lambda b, n=n: (
            taylor_T(x, n, b),
            _diagonal(excl(x, b), lambda p, n=n: len(p) <= n),
        ))
        for n in range(top + 1)
    ]
    y = sample_web(1, "b")
    n = min(2, degree)
    for i in range(samples):
        entries = _random_polynomial(x, y, n, rng)
        laws.append(Law(f"f ∘ ∂̄^{n + 1} = 0 #{i}", lambda b, entries=entries: (
            compose(WMorphism(excl(x, b), y, entries), coderc_pow(x, n + 1, b)),
            zero(coderc_pow(x, n + 1, b).source, y),
        )))
        laws.append(Law(f"f ∘ T{n} = f #{i}", lambda b, entries=entries: (
            compose(WMorphism(excl(x, b), y, entries), taylor_T(x, n, b)),
            WMorphism(excl(x, b), y, entries),
        )))
    return laws


def symmetric_sample(x: Web, y: Web, degree: int, mode: SemiringMode, rng: random.Random) -> WMorphism:
    """f = k ∘ ∂̄ for a random k on !X truncated at degree + 1, restricted to degree."""
    values = (1,) if mode is BOOL else (1, 2, -1, Fraction(1, 2))
    k = random_matrix(excl(x, degree + 1), y, rng, values=values).with_mode(mode)
    f = compose(k, coderc(x, degree + 1, mode))
    return f.restrict(pair_web(excl(x, degree), x), y)


def poincare_laws(x: Web, mode: SemiringMode, rng: random.Random, degree: int, samples: int) -> list[Law]:
    y = sample_web(1, "b")
    laws = []
    for i in range(samples):
        f = symmetric_sample(x, y, degree, mode, rng)
        if mode is BOOL:
            def sides(b: int, f: WMorphism = f) -> Sides:
                rel_f = Morphism.from_w(f)
                g = antiderivative_rel(rel_f)
                back = rel_compose(g, rel_coderc(x, degree + 1))
                return back.restrict(rel_f.source).to_w(), f
        else:
            def sides(b: int, f: WMorphism = f) -> Sides:
                g = poincare_antiderivative(f)
                return compose(g, coderc(x, degree + 1)).restrict(f.source), f
        laws.append(Law(f"g ∘ ∂̄ = f #{i}", sides, headroom=0))
    return laws


def ftc_laws(x: Web, mode: SemiringMode, rng: random.Random, degree: int, samples: int) -> list[Law]:
    if mode is BOOL:
        return [
            Law("∂̄ ∘ ∂ = Id on non-empty multisets", lambda b: (
                rel_compose(rel_coderc(x, b), rel_derc(x, b)).to_w(),
                _diagonal(excl(x, b), lambda p: len(p) > 0, BOOL),
            )),
            Law("J = Id", lambda b: (rel_J(x, b).to_w(), identity(excl(x, b), BOOL))),
        ]
    return [Law("∂̄ ∘ (I ⊗ Id) ∘ ∂ + w̄ ∘ w = Id", lambda b: ftc_sides(x, b))]


def quasifunctor_laws(x: Web, mode: SemiringMode, rng: random.Random, degree: int, samples: int) -> list[Law]:
    top = min(3, degree)
    laws = [
        Law("Id⁰ = w̄ ∘ w", lambda b: (
            quasifunctor_pow(identity(x), 0, b),
            compose(coweak(x, b), weak(x, b)),
        )),
    ]
    for i in range(samples):
        f = random_matrix(x, x, rng)
        g = random_matrix(x, x, rng)
        for n in range(top + 1):
            for p in range(top + 1):
                def sides(b: int, f: WMorphism = f, g: WMorphism = g, n: int = n, p: int = p) -> Sides:
                    lhs = compose(quasifunctor_pow(g, p, b), quasifunctor_pow(f, n, b))
                    if n != p:
                        return lhs, zero(lhs.source, lhs.target)
                    return lhs, quasifunctor_pow(compose(g, f), n, b).scale(factorial(n))
                laws.append(Law(f"g^{p} ∘ f^{n} #{i}", sides))
    return laws


def ji_laws(x: Web, mode: SemiringMode, rng: random.Random, degree: int, samples: int) -> list[Law]:
    def j_formula(b: int) -> WMorphism:
        ex = excl(x, b)
        return WMorphism(ex, ex, (((p, p), len(p) + 1) for p in ex.points))

    def i_tensor(b: int) -> WMorphism:
        return tensor(I(x, b), identity(x))

    return [
        Law("J = (|p| + 1) δ", lambda b: (J(x, b), j_formula(b))),
        Law("J ∘ I = Id", lambda b: (compose(J(x, b), I(x, b)), identity(excl(x, b)))),
        Law("I ∘ J = Id", lambda b: (compose(I(x, b), J(x, b)), identity(excl(x, b)))),
        Law("(I ⊗ Id) ∘ ψ = ψ ∘ (I ⊗ Id)", lambda b: (
            compose(i_tensor(b), psi(x, b)),
            compose(psi(x, b), i_tensor(b)),
        )),
    ]


SuiteBuilder = Callable[[Web, SemiringMode, random.Random, int, int], list[Law]]

SUITES: dict[str, tuple[tuple[str, ...], SuiteBuilder]] = {
    "bialgebra": (("rel", "wrel"), bialgebra_laws),
    "comonad": (("rel", "wrel"), comonad_laws),
    "seely": (("rel", "wrel"), seely_laws),
    "leibniz": (("rel", "wrel"), leibniz_laws),
    "schwarz": (("rel", "wrel"), schwarz_laws),
    "taylor": (("wrel",), taylor_laws),
    "poincare": (("rel", "wrel"), poincare_laws),
    "ftc": (("rel", "wrel"), ftc_laws),
    "quasifunctor": (("wrel",), quasifunctor_laws),
    "ji": (("wrel",), ji_laws),
}


def suite_models(name: str, model: str) -> tuple[str, ...]:
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    supported = SUITES[name][0]
    if model == "both":
        return supported
    if model not in supported:
        raise UnknownSuite(f"suite {name} has no {model} version")
    return (model,)


def iter_laws(name: str, web_size: int, degree: int, model: str = "both",
              seed: int = 0, samples: int = 3) -> Iterator[tuple[str, Law]]:
    """(model, law) pairs of a suite; the random samples depend only on seed."""
    x = sample_web(web_size)
    for m in suite_models(name, model):
        rng = random.Random(seed)
        for law in SUITES[name][1](x, MODEL_MODES[m], rng, degree, samples):
            yield m, law


def run_suite(name: str, web_size: int = 1, degree: int = 3, model: str = "both",
              seed: int = 0, samples: int = 3, stability: bool = True) -> list[LawResult]:
    results = []
    for m, law in iter_laws(name, web_size, degree, model, seed, samples):
        counterexample = check_law(law, degree, stability)
        logger.debug("%s/%s [%s]: %s", name, law.name, m, "ok" if not counterexample else "FAILED")
        results.append(LawResult(name, law.name, m, not counterexample, counterexample))
    return results

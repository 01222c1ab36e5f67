"""Growth-versus-structure analysis for subsets of a free product.

Given a finite subset of a two-factor free product, :func:`dichotomy`
produces a machine-checkable certificate: either a *growth* witness (an
explicitly enumerated subset of the triple product meeting the stage's
constant), or a *structure* witness (the generated subgroup is verified
infinite cyclic, finite cyclic or infinite dihedral), or a verified
conjugation of the whole set into one factor.  Certificates can be
re-validated from scratch with :func:`validate_certificate`, entirely
independently of the pipeline's internal state.

The pipeline stages:

1. conjugate away any strict majority of ``(x, ..., x^-1)`` normal forms
   (an order-two stall is flagged and handled separately);
2. split off subsets X, Y of at least 1/18 of the set with no
   cancellation across X x Y in either order;
3. shrink to halves of at least 1/36 with ``sigma(x) <= sigma(y)``;
4. turn any sufficiently short Y word into quadratic growth (constant
   1/5184) or a factor-conjugation witness;
5. for long Y words, count fibers of ``(u1, u2) -> u1 y u2``: an at
   most 2-to-1 map gives growth at 1/2592; otherwise every y is
   (interior) periodic and period/affix mismatches give growth at
   1/7776; fully aligned periodic families either grow at 1/1296 or
   generate a verified cyclic or dihedral subgroup.

Sets smaller than 36 fall back to direct enumeration plus the subgroup
classifier; the constants are vacuous at that size.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Union

from .encoding import canonical_encode
from .groups import GroupError
from .sets import WordSet, power_set
from .words import FreeProduct, PeriodicDecomposition, SyllableType


class AnalysisIncomplete(GroupError):
    """No analysis branch closed; indicates an implementation bug."""

    def __init__(self, message: str, trace=()) -> None:
        super().__init__(message)
        self.trace = list(trace)


class DegenerateSetError(GroupError):
    """Singleton of an order-two element: no cancellation-free split exists.

    For ``A = {w}`` with ``w`` of order two, every conjugate of A is again
    a single order-two element v, and ``v * v`` cancels completely, so no
    choice of non-empty X and Y avoids cancellation.  This is the unique
    input shape for which the 1/18 split cannot exist.
    """


# -- result types -----------------------------------------------------------


@dataclass(frozen=True)
class SubgroupClass:
    """Verified witness for the subgroup generated by a set.

    Sound but not complete: ``other`` only means no witness was found.
    ``factor-conjugate`` uses the convention ``c A c^-1`` inside factor
    ``factor_index`` for the stored conjugator ``c``.
    """

    kind: str
    root: Optional[tuple] = None
    order: Optional[int] = None
    rotation: Optional[tuple] = None
    reflection: Optional[tuple] = None
    conjugator: Optional[tuple] = None
    factor_index: Optional[int] = None


@dataclass(frozen=True)
class XYWitness:
    """Subsets X, Y of ``conjugator * A * conjugator^-1`` without
    cancellation across X x Y in either order."""

    conjugator: tuple
    X: tuple
    Y: tuple
    stage: str  # "split" -> "length-ordered" -> "long-words"


@dataclass(frozen=True)
class GrowthCertificate:
    kind = "growth"
    witness: tuple  # words in original coordinates, each a <=3-fold product
    claimed_constant: Fraction
    trace: tuple


@dataclass(frozen=True)
class StructureCertificate:
    kind = "structure"
    conjugator: tuple
    period: tuple
    tail: tuple
    classification: SubgroupClass
    trace: tuple


@dataclass(frozen=True)
class FactorConjugateCertificate:
    kind = "factor-conjugate"
    conjugator: tuple
    factor_index: int
    trace: tuple


Certificate = Union[GrowthCertificate, StructureCertificate, FactorConjugateCertificate]


@dataclass(frozen=True)
class CollisionReport:
    max_fiber: int
    image_size: int
    image: tuple
    decomposition: Optional[PeriodicDecomposition]
    evidence: tuple


# -- helpers ----------------------------------------------------------------


def _require_free_product(group) -> FreeProduct:
    if not isinstance(group, FreeProduct):
        raise GroupError("this analysis needs a two-factor free product ambient")
    return group


def _total_sigma(words) -> int:
    return sum(len(w) for w in words)


def _word_key(w):
    return (len(w), canonical_encode(w))


def _endswith(word, suffix) -> bool:
    return 0 < len(suffix) <= len(word) and word[-len(suffix) :] == suffix


# -- stage 1: majority conjugation ------------------------------------------


def reduce_majority_conjugate(a: WordSet):
    """Conjugate until no factor letter x has a strict majority of the
    set in normal form ``(x, ..., x^-1)``.

    Returns ``(conjugator, reduced_set, stalled)`` with
    ``reduced = conjugator * A * conjugator^-1``.  Each accepted step
    strictly decreases total syllable length, so the loop terminates;
    a non-decreasing step only happens for the order-two letter pattern
    ``(x, ..., x)`` and is reported through the stall flag.
    """
    group = _require_free_product(a.group)
    conjugator: tuple = ()
    current = list(a.words)
    while True:
        counts: dict = {}
        for w in current:
            if not w:
                continue
            i, x = w[0]
            j, last = w[-1]
            if i == j and last == group.factors[i].inv(x):
                counts[(i, x)] = counts.get((i, x), 0) + 1
        majority = [key for key, c in counts.items() if 2 * c > len(current)]
        if not majority:
            return conjugator, WordSet(group, current), False
        i, x = majority[0]
        step = ((i, group.factors[i].inv(x)),)
        step_inv = ((i, x),)
        conjugated = [group.mul(group.mul(step, w), step_inv) for w in current]
        if _total_sigma(conjugated) < _total_sigma(current):
            current = conjugated
            conjugator = group.mul(step, conjugator)
        else:
            return conjugator, WordSet(group, current), True


# -- stage 2: the no-cancellation split --------------------------------------


def extract_xy(a: WordSet) -> XYWitness:
    """Find X, Y of at least |A|/18 elements of a conjugate of A with no
    cancellation in xy or yx for any x in X, y in Y.

    Follows the constructive case split: an even type bucket of 1/18,
    both odd buckets of 1/18, or the boundary-letter partition of the
    dominant odd bucket with thresholds |bucket|/15 and the one-by-one
    transfer loop.  The identity is put in the currently smaller odd
    bucket (ties to the left factor); multiplying by it never cancels.
    """
    group = _require_free_product(a.group)
    conjugator, reduced, stalled = reduce_majority_conjugate(a)
    words = reduced.words
    buckets: dict = {
        SyllableType.G_ODD: [],
        SyllableType.H_ODD: [],
        SyllableType.G_EVEN: [],
        SyllableType.H_EVEN: [],
    }
    pending_ids = []
    for w in words:
        t = group.syllable_type(w)
        if t is SyllableType.IDENTITY:
            pending_ids.append(w)
        else:
            buckets[t].append(w)
    for w in pending_ids:
        if len(buckets[SyllableType.G_ODD]) <= len(buckets[SyllableType.H_ODD]):
            buckets[SyllableType.G_ODD].append(w)
        else:
            buckets[SyllableType.H_ODD].append(w)
    g_odd = buckets[SyllableType.G_ODD]
    h_odd = buckets[SyllableType.H_ODD]
    if stalled:
        # order-two stall: the odd buckets themselves already work
        if not g_odd or not h_odd:
            raise DegenerateSetError(
                "a singleton order-two element admits no cancellation-free X, Y"
            )
        return XYWitness(conjugator, tuple(g_odd), tuple(h_odd), "split")
    n = len(words)
    threshold = Fraction(n, 18)
    for even_type in (SyllableType.G_EVEN, SyllableType.H_EVEN):
        if len(buckets[even_type]) >= threshold:
            side = tuple(buckets[even_type])
            return XYWitness(conjugator, side, side, "split")
    if len(g_odd) >= threshold and len(h_odd) >= threshold:
        return XYWitness(conjugator, tuple(g_odd), tuple(h_odd), "split")

    dominant = g_odd if len(g_odd) >= len(h_odd) else h_odd
    fac = 0 if dominant is g_odd else 1
    factor = group.factors[fac]

    def boundary(w):
        if not w:
            return (factor.identity, factor.identity)
        return (w[0][1], factor.inv(w[-1][1]))

    pairs = {w: boundary(w) for w in dominant}
    values = sorted(
        {v for pair in pairs.values() for v in pair}, key=canonical_encode
    )
    if len(values) == 1:
        # all boundaries equal (v, v); after stage 1 this forces v = id,
        # i.e. the bucket is just the identity word
        if values[0] == factor.identity:
            side = tuple(dominant)
            return XYWitness(conjugator, side, side, "split")
        raise AnalysisIncomplete("majority pattern survived conjugation")
    e1 = set(values[: -(-len(values) // 2)])
    e2 = set(values) - e1
    limit = Fraction(len(dominant), 15)

    def split_classes():
        c11, c12, c21, c22 = [], [], [], []
        for w in dominant:
            p, q = pairs[w]
            if p in e1:
                (c11 if q in e1 else c12).append(w)
            else:
                (c21 if q in e1 else c22).append(w)
        return c11, c12, c21, c22

    def admissible(c11, c12, c21, c22):
        if len(c12) >= limit:
            return c12, c12
        if len(c21) >= limit:
            return c21, c21
        if len(c11) >= limit and len(c22) >= limit:
            return c11, c22
        return None

    c11, c12, c21, c22 = split_classes()
    chosen = admissible(c11, c12, c21, c22)
    if chosen is None:
        if len(c22) > len(c11):
            e1, e2 = e2, e1
        while e1:
            moved = min(e1, key=canonical_encode)
            e1.remove(moved)
            e2.add(moved)
            c11, c12, c21, c22 = split_classes()
            if len(c12) >= limit:
                chosen = (c12, c12)
                break
            if len(c21) >= limit:
                chosen = (c21, c21)
                break
            if len(c22) >= limit:
                if len(c11) >= limit:
                    chosen = (c11, c22)
                    break
                # the crossing move: the moved letter's row and column
                # live inside the off-diagonal classes
                row = [w for w in dominant if pairs[w][0] == moved and pairs[w][1] in e1]
                if len(row) >= limit:
                    chosen = (c21, c21)
                    break
                col = [w for w in dominant if pairs[w][0] in e1 and pairs[w][1] == moved]
                if len(col) >= limit:
                    chosen = (c12, c12)
                    break
                raise AnalysisIncomplete(
                    "transfer loop stalled without a majority pattern"
                )
        if chosen is None:
            raise AnalysisIncomplete("transfer loop exhausted the partition")
    x_side, y_side = chosen
    return XYWitness(conjugator, tuple(x_side), tuple(y_side), "split")


# -- stage 3: length ordering -------------------------------------------------


def order_xy(witness: XYWitness) -> XYWitness:
    """Halve X and Y around their length medians so that every X word is
    at most as long as every Y word; sides swap if needed."""
    if witness.stage != "split":
        raise ValueError("order_xy consumes a fresh split witness")
    xs = sorted(witness.X, key=_word_key)
    ys = sorted(witness.Y, key=_word_key)
    x_med = len(xs[(len(xs) + 1) // 2 - 1])
    y_med = len(ys[(len(ys) + 1) // 2 - 1])
    if x_med > y_med:
        xs, ys = ys, xs
    new_x = tuple(xs[: (len(xs) + 1) // 2])
    new_y = tuple(ys[-((len(ys) + 1) // 2) :])
    return XYWitness(witness.conjugator, new_x, new_y, "length-ordered")


# -- stage 4: short words ------------------------------------------------------


def _growth_certificate(group, conjugator, image, constant, set_size, trace):
    if Fraction(len(image)) < constant * set_size * set_size:
        raise AnalysisIncomplete(
            f"growth image smaller than claimed constant {constant}", trace
        )
    inv = group.inv(conjugator)
    witness = sorted(
        {group.mul(group.mul(inv, w), conjugator) for w in image},
        key=canonical_encode,
    )
    return GrowthCertificate(
        witness=tuple(witness), claimed_constant=constant, trace=tuple(trace)
    )


def short_word_dispatch(witness: XYWitness, conjugated: WordSet, trace=None):
    """Resolve short Y words: growth at 1/5184, a factor-conjugation
    certificate, or a pass-through witness whose Y words all have
    syllable length at least 4 (at least 6 in the even case)."""
    if witness.stage != "length-ordered":
        raise ValueError("short_word_dispatch consumes a length-ordered witness")
    group = _require_free_product(conjugated.group)
    trace = [] if trace is None else trace
    xs, ys = witness.X, witness.Y
    n = len(conjugated)
    y_min = min(len(y) for y in ys)
    parity_odd = any(len(u) % 2 for u in xs) or any(len(u) % 2 for u in ys)
    constant = Fraction(1, 5184)

    def growth(rows, y_word, rule):
        image = set()
        for u1 in rows:
            left = group.mul(u1, y_word)
            for u2 in rows:
                image.add(group.mul(left, u2))
        if len(image) != len(rows) ** 2:
            raise AnalysisIncomplete("short-word map unexpectedly non-injective", trace)
        trace.append(
            {
                "rule": rule,
                "action": "growth",
                "sizes": {"rows": len(rows), "image": len(image)},
                "constant": str(constant),
            }
        )
        return _growth_certificate(
            group, witness.conjugator, image, constant, n, trace
        )

    if parity_odd:
        if y_min <= 1:
            x_factors = {u[0][0] for u in xs if u}
            if len(x_factors) > 1:
                raise AnalysisIncomplete("mixed-factor short X side", trace)
            x_fac = x_factors.pop() if x_factors else None

            def outside(w):
                if not w:
                    return False
                return len(w) > 1 or (x_fac is not None and w[0][0] != x_fac)

            candidates = [w for w in conjugated.words if outside(w)]
            if not candidates:
                fac = x_fac if x_fac is not None else 0
                trace.append(
                    {
                        "rule": "factor-containment",
                        "action": "factor-conjugate",
                        "sizes": {"set": n},
                    }
                )
                return FactorConjugateCertificate(
                    conjugator=witness.conjugator,
                    factor_index=fac,
                    trace=tuple(trace),
                )
            return growth(xs, candidates[0], "short-word-growth")
        if y_min == 3:
            y_word = min((y for y in ys if len(y) == 3), key=canonical_encode)
            short = [x for x in xs if len(x) <= 1]
            longer = [x for x in xs if len(x) == 3]
            rows = short if len(short) >= len(longer) else longer
            return growth(rows, y_word, "short-word-growth")
        threshold = 4
    else:
        if y_min == 2:
            y_word = min((y for y in ys if len(y) == 2), key=canonical_encode)
            return growth(list(xs), y_word, "short-word-growth")
        if y_min == 4:
            y_word = min((y for y in ys if len(y) == 4), key=canonical_encode)
            two = [x for x in xs if len(x) == 2]
            four = [x for x in xs if len(x) == 4]
            rows = two if len(two) >= len(four) else four
            return growth(rows, y_word, "short-word-growth")
        threshold = 6
    trace.append(
        {
            "rule": "long-word-filter",
            "action": "pass-through",
            "sizes": {"x": len(xs), "y": len(ys), "min_y_length": y_min},
            "parity": "odd" if parity_odd else "even",
            "min_length_kept": threshold,
        }
    )
    return replace(witness, stage="long-words")


# -- stage 5: fibers and periodicity -------------------------------------------


def collision_analysis(group, y, x_words, odd_mode: Optional[bool] = None) -> CollisionReport:
    """Fiber statistics of ``(u1, u2) -> u1 y u2`` over ``X x X``.

    A fiber of size at least 3 forces ``y`` to be interior periodic; the
    decomposition is extracted and, per fiber, the first components whose
    normal forms end in the predicted period suffixes are recorded.
    """
    group = _require_free_product(group)
    fibers: dict = {}
    for u1 in x_words:
        left = group.mul(u1, y)
        for u2 in x_words:
            w = group.mul(left, u2)
            fibers.setdefault(w, []).append((u1, u2))
    max_fiber = max(len(v) for v in fibers.values())
    decomposition = None
    evidence = []
    if max_fiber >= 3:
        decomposition = group.interior_period_decompose(y)
        if decomposition is None:
            raise AnalysisIncomplete(
                "a 3-fiber exists but y is not interior periodic"
            )
        if odd_mode is None:
            types = {group.syllable_type(u) for u in list(x_words) + [y] if u}
            odd_mode = len(types) == 1 and next(iter(types)).is_odd
        for w in sorted(fibers, key=canonical_encode):
            pre = fibers[w]
            if len(pre) < 3:
                continue
            firsts = []
            for u1, _ in pre:
                if u1 not in firsts:
                    firsts.append(u1)
            matching = _suffix_evidence(group, firsts, decomposition, odd_mode)
            evidence.append(
                {
                    "fiber_size": len(pre),
                    "first_components": len(firsts),
                    "matching_firsts": len(matching),
                }
            )
    return CollisionReport(
        max_fiber=max_fiber,
        image_size=len(fibers),
        image=tuple(sorted(fibers, key=canonical_encode)),
        decomposition=decomposition,
        evidence=tuple(evidence),
    )


def _suffix_evidence(group, firsts, decomposition, odd_mode):
    if not odd_mode:
        return [u for u in firsts if _endswith(u, decomposition.period)]
    base = group.mul(decomposition.period, group.inv(decomposition.g))
    matched = []
    for u in firsts:
        if _endswith(u, base):
            matched.append(u)
            continue
        for v in firsts:
            if v is u or not v:
                continue
            omega = (v[-1],)
            pattern = group.mul(group.mul(omega, decomposition.g), base)
            if _endswith(u, pattern):
                matched.append(u)
                break
    return matched


# -- subgroup classification ----------------------------------------------------


def is_power_word(group: FreeProduct, w, root) -> bool:
    """Exact test for ``w`` being an integer power of ``root``."""
    if not w:
        return True
    if not root:
        return False
    conj, core = group.cyclic_reduce(root)
    conj_word = tuple(conj)
    if len(core) >= 2:
        k_max = len(w) // len(core) + 2
        for base in (root, group.inv(root)):
            p = ()
            for _ in range(k_max):
                p = group.mul(p, base)
                if p == w:
                    return True
        return False
    index, payload = core[0]
    target = group.mul(group.mul(group.inv(conj_word), w), conj_word)
    if len(target) != 1 or target[0][0] != index:
        return False
    return group.factors[index].power_index(payload, target[0][1]) is not None


def _common_factor_reduction(group: FreeProduct, words):
    """Greedy search for one conjugator taking every word into one factor.

    Returns ``(conjugator, factor_index, reduced_words)`` or None.  This
    is complete for genuinely factor-conjugate sets: their long members
    share the pattern ``(c, ..., c^-1)`` with a common head which is
    stripped two syllables at a time.
    """
    conjugator: tuple = ()
    current = list(words)
    while True:
        singles = [w for w in current if len(w) == 1]
        long_words = [w for w in current if len(w) >= 2]
        if not long_words:
            present = {w[0][0] for w in singles}
            if len(present) > 1:
                return None
            fac = present.pop() if present else 0
            return conjugator, fac, current
        heads = {w[0] for w in long_words}
        if len(heads) != 1:
            return None
        index, head = heads.pop()
        factor = group.factors[index]
        expected_last = (index, factor.inv(head))
        if any(len(w) % 2 == 0 or w[-1] != expected_last for w in long_words):
            return None
        if any(w[0][0] != index for w in singles):
            return None
        step = ((index, factor.inv(head)),)
        step_inv = ((index, head),)
        current = [group.mul(group.mul(step, w), step_inv) for w in current]
        conjugator = group.mul(step, conjugator)


def _classify_within_factor(group: FreeProduct, fac: int, words) -> Optional[SubgroupClass]:
    """Refine a set of single letters of one factor to a cyclic witness."""
    from math import gcd

    from .groups import CayleyTableGroup, CyclicGroup, IntegerGroup

    letters = [w[0][1] for w in words if w]
    if not letters:
        return SubgroupClass(kind="finite-cyclic", root=(), order=1)
    factor = group.factors[fac]
    if isinstance(factor, IntegerGroup):
        d = 0
        for v in letters:
            d = gcd(d, abs(v))
        return SubgroupClass(kind="infinite-cyclic", root=((fac, d),))
    if isinstance(factor, CyclicGroup):
        d = factor.n
        for v in letters:
            d = gcd(d, v)
        root = ((fac, d),) if d != factor.n else ()
        if not root:
            return SubgroupClass(kind="finite-cyclic", root=(), order=1)
        return SubgroupClass(
            kind="finite-cyclic", root=root, order=factor.n // d
        )
    if isinstance(factor, CayleyTableGroup):
        closure = {factor.identity}
        frontier = list(letters)
        while frontier:
            g = frontier.pop()
            for h in list(closure):
                for p in (factor.mul(g, h), factor.mul(h, g)):
                    if p not in closure:
                        closure.add(p)
                        frontier.append(p)
            if g not in closure:
                closure.add(g)
                frontier.extend(letters)
        for h in sorted(closure):
            if factor.order(h) == len(closure):
                return SubgroupClass(
                    kind="finite-cyclic", root=((fac, h),), order=len(closure)
                )
        return None
    # generic backends: try the first infinite-order letter as the root
    base = None
    for v in letters:
        if factor.order(v) is None:
            base = v
            break
    if base is None:
        if len(set(letters)) == 1:
            return SubgroupClass(
                kind="finite-cyclic",
                root=((fac, letters[0]),),
                order=factor.order(letters[0]),
            )
        return None
    if all(factor.power_index(base, v) is not None for v in letters):
        return SubgroupClass(kind="infinite-cyclic", root=((fac, base),))
    return None


def classify_subgroup(a: WordSet) -> SubgroupClass:
    """Classify the subgroup generated by the set, with a verified witness.

    Checks, in order: common conjugation into a factor (refined to a
    cyclic witness when no conjugation is needed), powers of the
    primitive root of an infinite-order element, and dihedral structure
    around a rotation candidate (the primitive root of an infinite-order
    element or of a product of two order-two elements).  Sound, not
    complete: ``other`` never certifies anything.
    """
    group = _require_free_product(a.group)
    non_identity = [w for w in a.words if w]
    if not non_identity:
        return SubgroupClass(kind="finite-cyclic", root=(), order=1)
    reduction = _common_factor_reduction(group, a.words)
    if reduction is not None:
        conjugator, fac, reduced = reduction
        if conjugator == ():
            refined = _classify_within_factor(group, fac, reduced)
            if refined is not None:
                return refined
        return SubgroupClass(
            kind="factor-conjugate", conjugator=conjugator, factor_index=fac
        )
    infinite = next(
        (w for w in non_identity if group.order(w) is None), None
    )
    rotation_candidates = []
    if infinite is not None:
        root, _ = group.primitive_root(infinite)
        if all(is_power_word(group, w, root) for w in a.words):
            return SubgroupClass(kind="infinite-cyclic", root=root)
        rotation_candidates.append(root)
    reflections = [w for w in non_identity if group.mul(w, w) == ()]
    for i in range(len(reflections)):
        found = False
        for j in range(len(reflections)):
            if i == j:
                continue
            prod = group.mul(reflections[i], reflections[j])
            if prod and group.order(prod) is None:
                rotation_candidates.append(group.primitive_root(prod)[0])
                found = True
                break
        if found:
            break
    for rotation in rotation_candidates:
        rotation_inv = group.inv(rotation)
        reflecting = []
        ok = True
        for w in a.words:
            if is_power_word(group, w, rotation):
                continue
            if group.mul(w, w) == () and group.conjugate(w, rotation) == rotation_inv:
                reflecting.append(w)
                continue
            ok = False
            break
        if ok and reflecting:
            return SubgroupClass(
                kind="infinite-dihedral",
                rotation=rotation,
                reflection=reflecting[0],
            )
    return SubgroupClass(kind="other")


# -- the full dichotomy ----------------------------------------------------------


def dichotomy(a: WordSet) -> Certificate:
    """Produce a validated growth / structure / factor certificate."""
    group = _require_free_product(a.group)
    n = len(a)
    trace: list = []
    if n < 36:
        return _small_set_certificate(a, trace)
    witness = extract_xy(a)
    trace.append(
        {
            "rule": "no-cancellation-split",
            "action": "split",
            "sizes": {"set": n, "x": len(witness.X), "y": len(witness.Y)},
        }
    )
    witness = order_xy(witness)
    trace.append(
        {
            "rule": "length-median",
            "action": "order",
            "sizes": {"x": len(witness.X), "y": len(witness.Y)},
        }
    )
    gamma = witness.conjugator
    gamma_inv = group.inv(gamma)
    conjugated = WordSet(
        group, (group.mul(group.mul(gamma, w), gamma_inv) for w in a.words)
    )
    outcome = short_word_dispatch(witness, conjugated, trace)
    if not isinstance(outcome, XYWitness):
        return outcome
    witness = outcome
    xs, ys = witness.X, witness.Y
    types = {group.syllable_type(u) for u in xs + ys if u}
    odd_mode = len(types) == 1 and next(iter(types)).is_odd

    decompositions = []
    for y in sorted(ys, key=_word_key):
        report = collision_analysis(group, y, xs, odd_mode)
        if report.max_fiber <= 2:
            trace.append(
                {
                    "rule": "two-fiber-growth",
                    "action": "growth",
                    "sizes": {"x": len(xs), "image": report.image_size},
                    "constant": str(Fraction(1, 2592)),
                }
            )
            return _growth_certificate(
                group, gamma, report.image, Fraction(1, 2592), n, trace
            )
        decompositions.append((y, report.decomposition))

    periods = {d.period for _, d in decompositions}
    affixes = {(d.period, d.g, d.tail, d.gamma) for _, d in decompositions}
    if len(periods) > 1 or len(affixes) > 1:
        rule = "period-mismatch-growth" if len(periods) > 1 else "affix-mismatch-growth"
        image = set()
        for x1 in xs:
            for y in ys:
                left = group.mul(x1, y)
                for x2 in xs:
                    image.add(group.mul(left, x2))
        trace.append(
            {
                "rule": rule,
                "action": "growth",
                "sizes": {"xyx": len(image)},
                "constant": str(Fraction(1, 7776)),
            }
        )
        return _growth_certificate(group, gamma, image, Fraction(1, 7776), n, trace)

    _, common = decompositions[0]
    period, tail = common.period, common.tail
    current_words = conjugated.words
    current_y = list(ys)
    if odd_mode:
        image2 = set()
        for y1 in current_y:
            for y2 in current_y:
                image2.add(group.mul(y1, y2))
        if Fraction(len(image2)) >= Fraction(n * n, 1296):
            trace.append(
                {
                    "rule": "pair-injectivity-growth",
                    "action": "growth",
                    "sizes": {"y": len(current_y), "image": len(image2)},
                    "constant": str(Fraction(1, 1296)),
                }
            )
            return _growth_certificate(
                group, gamma, image2, Fraction(1, 1296), n, trace
            )
        # align the interior decorations: conjugate by the absorbed letter
        g_word = common.g
        if g_word:
            g_inv = group.inv(g_word)
            current_words = tuple(
                group.mul(group.mul(g_inv, w), g_word) for w in current_words
            )
            current_y = [group.mul(group.mul(g_inv, w), g_word) for w in current_y]
            gamma = group.mul(g_inv, gamma)
        else:
            current_y = list(current_y)
        plain = [group.period_decompose(y) for y in current_y]
        if any(p is None for p in plain):
            raise AnalysisIncomplete("expected plain periodicity after alignment", trace)
        plain_keys = {(p.period, p.tail) for p in plain}
        if len(plain_keys) > 1:
            raise AnalysisIncomplete("periods diverged after alignment", trace)
        period, tail = plain_keys.pop()
        trace.append(
            {
                "rule": "periodic-alignment",
                "action": "conjugate",
                "sizes": {"y": len(current_y)},
            }
        )

    target = len(current_y) ** 2
    current_words = tuple(sorted(current_words, key=canonical_encode))
    for mid in ((),) + current_words:
        image = set()
        for y1 in current_y:
            left = group.mul(y1, mid)
            for y2 in current_y:
                image.add(group.mul(left, y2))
        if len(image) == target:
            trace.append(
                {
                    "rule": "separator-injectivity-growth",
                    "action": "growth",
                    "sizes": {"y": len(current_y), "image": len(image)},
                    "constant": str(Fraction(1, 1296)),
                }
            )
            return _growth_certificate(
                group, gamma, image, Fraction(1, 1296), n, trace
            )

    classification = classify_subgroup(a)
    trace.append(
        {
            "rule": "periodic-structure",
            "action": "classify",
            "sizes": {"set": n},
            "classification": classification.kind,
        }
    )
    if classification.kind == "factor-conjugate":
        return FactorConjugateCertificate(
            conjugator=classification.conjugator,
            factor_index=classification.factor_index,
            trace=tuple(trace),
        )
    if classification.kind in ("infinite-cyclic", "finite-cyclic", "infinite-dihedral"):
        return StructureCertificate(
            conjugator=gamma,
            period=period,
            tail=tail,
            classification=classification,
            trace=tuple(trace),
        )
    raise AnalysisIncomplete("all periodic but no verified structure", trace)


def _small_set_certificate(a: WordSet, trace: list) -> Certificate:
    group = a.group
    n = len(a)
    trace.append(
        {
            "rule": "small-set-enumeration",
            "action": "brute-force",
            "sizes": {"set": n},
        }
    )
    classification = classify_subgroup(a)
    if classification.kind == "factor-conjugate":
        return FactorConjugateCertificate(
            conjugator=classification.conjugator,
            factor_index=classification.factor_index,
            trace=tuple(trace),
        )
    if classification.kind in ("infinite-cyclic", "finite-cyclic", "infinite-dihedral"):
        return StructureCertificate(
            conjugator=(),
            period=(),
            tail=(),
            classification=classification,
            trace=tuple(trace),
        )
    cube = power_set(a, 3)
    trace.append(
        {
            "rule": "small-set-enumeration",
            "action": "growth",
            "sizes": {"cube": len(cube)},
            "constant": str(Fraction(1, 7776)),
        }
    )
    return _growth_certificate(group, (), cube.words, Fraction(1, 7776), n, trace)


# -- validation -------------------------------------------------------------------


def validate_certificate(a: WordSet, certificate: Certificate):
    """Re-check a certificate from scratch against the original set.

    Growth: every witness word must be a product of at most three set
    elements and the witness must meet the claimed constant.  Structure
    and factor certificates re-run the class witness checks.  Returns
    ``(ok, report)`` where the report names the first violation.
    """
    group = a.group
    if isinstance(certificate, GrowthCertificate):
        reachable = set(a.words)
        layer = set(a.words)
        for _ in range(2):
            layer = {group.mul(u, v) for u in layer for v in a.words}
            reachable |= layer
        for w in certificate.witness:
            if w not in reachable:
                return False, f"witness word is not a short product: {group.format(w)}"
        need = certificate.claimed_constant * len(a) * len(a)
        if Fraction(len(certificate.witness)) < need:
            return (
                False,
                f"witness has {len(certificate.witness)} words, needs {need}",
            )
        return True, "growth witness verified"
    if isinstance(certificate, FactorConjugateCertificate):
        c = certificate.conjugator
        c_inv = group.inv(c)
        for w in a.words:
            moved = group.mul(group.mul(c, w), c_inv)
            if len(moved) > 1 or (moved and moved[0][0] != certificate.factor_index):
                return False, f"element stays outside the factor: {group.format(w)}"
        return True, "factor conjugation verified"
    if isinstance(certificate, StructureCertificate):
        cls = certificate.classification
        if cls.kind in ("infinite-cyclic", "finite-cyclic"):
            if cls.kind == "infinite-cyclic" and group.order(cls.root) is not None:
                return False, "cyclic root has finite order"
            if cls.kind == "finite-cyclic" and group.order(cls.root) != cls.order:
                return False, "cyclic root order mismatch"
            for w in a.words:
                if not is_power_word(group, w, cls.root):
                    return False, f"element is not a root power: {group.format(w)}"
            return True, "cyclic witness verified"
        if cls.kind == "infinite-dihedral":
            if group.order(cls.rotation) is not None:
                return False, "rotation has finite order"
            if cls.reflection not in a:
                return False, "reflection witness is not in the set"
            rotation_inv = group.inv(cls.rotation)
            for w in a.words:
                if is_power_word(group, w, cls.rotation):
                    continue
                if group.mul(w, w) == () and group.conjugate(w, cls.rotation) == rotation_inv:
                    continue
                return False, f"element is neither rotation nor reflection: {group.format(w)}"
            return True, "dihedral witness verified"
        return False, f"unverifiable classification kind {cls.kind!r}"
    return False, f"unknown certificate type {type(certificate).__name__}"


# -- serialization ------------------------------------------------------------------


def classification_to_json(group, cls: SubgroupClass) -> dict:
    doc: dict = {"kind": cls.kind}
    if cls.root is not None:
        doc["root"] = group.format(cls.root)
    if cls.order is not None:
        doc["order"] = cls.order
    if cls.rotation is not None:
        doc["rotation"] = group.format(cls.rotation)
    if cls.reflection is not None:
        doc["reflection"] = group.format(cls.reflection)
    if cls.conjugator is not None:
        doc["conjugator"] = group.format(cls.conjugator)
    if cls.factor_index is not None:
        doc["factor_index"] = cls.factor_index
    return doc


def classification_from_json(group, doc: dict) -> SubgroupClass:
    def word(key):
        return group.parse(doc[key]) if key in doc else None

    return SubgroupClass(
        kind=doc["kind"],
        root=word("root"),
        order=doc.get("order"),
        rotation=word("rotation"),
        reflection=word("reflection"),
        conjugator=word("conjugator"),
        factor_index=doc.get("factor_index"),
    )


def certificate_to_json(group, certificate: Certificate) -> dict:
    if isinstance(certificate, GrowthCertificate):
        return {
            "kind": "growth",
            "claimed_constant": str(certificate.claimed_constant),
            "witness": [group.format(w) for w in certificate.witness],
            "trace": list(certificate.trace),
        }
    if isinstance(certificate, StructureCertificate):
        return {
            "kind": "structure",
            "conjugator": group.format(certificate.conjugator),
            "period": group.format(certificate.period),
            "tail": group.format(certificate.tail),
            "classification": classification_to_json(
                group, certificate.classification
            ),
            "trace": list(certificate.trace),
        }
    if isinstance(certificate, FactorConjugateCertificate):
        return {
            "kind": "factor-conjugate",
            "conjugator": group.format(certificate.conjugator),
            "factor_index": certificate.factor_index,
            "trace": list(certificate.trace),
        }
    raise TypeError(f"unknown certificate {type(certificate).__name__}")


def certificate_from_json(group, doc: dict) -> Certificate:
    kind = doc.get("kind")
    trace = tuple(doc.get("trace", ()))
    if kind == "growth":
        return GrowthCertificate(
            witness=tuple(group.parse(text) for text in doc["witness"]),
            claimed_constant=Fraction(doc["claimed_constant"]),
            trace=trace,
        )
    if kind == "structure":
        return StructureCertificate(
            conjugator=group.parse(doc["conjugator"]),
            period=group.parse(doc["period"]),
            tail=group.parse(doc["tail"]),
            classification=classification_from_json(group, doc["classification"]),
            trace=trace,
        )
    if kind == "factor-conjugate":
        return FactorConjugateCertificate(
            conjugator=group.parse(doc["conjugator"]),
            factor_index=doc["factor_index"],
            trace=trace,
        )
    raise ValueError(f"unknown certificate kind {kind!r}")

"""Normal-form word arithmetic in free products.

A word over ``G * H`` is a tuple of letters ``(factor_index, payload)``
with adjacent letters in distinct factors and no letter equal to its
factor's identity; the empty tuple is the group identity.  These tuples
are the normal forms, so structural equality is group equality.

Multiplication concatenates and then resolves the junction: same-factor
boundary letters either merge into one letter (absorption) or annihilate
(cancellation), in which case reduction continues inward.

n-ary free products are nested binary ones: a factor of a free product
may itself be a free product, in which case letter payloads are inner
words.  The growth/structure analysis requires exactly two top-level
factors; plain word and set arithmetic works for any nesting.

Periodicity notions implemented here (all exact, on normal forms):

- ``y`` is periodic when ``y = p^s t`` with ``s >= 2``, ``p`` an even
  primitive word, ``t`` a proper prefix of ``p`` (possibly empty) and no
  interaction between the concatenated pieces; right periodic mirrors
  this with a suffix head.
- an odd word is interior periodic when ``y = g1 p^s t g2`` with ``g1``
  absorbed into the first period letter, ``t`` even or empty and
  ``g2 != id`` appended cleanly; the right version absorbs at the far
  end instead.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .groups import Group, GroupError, GroupLoadError


class FiniteOrderError(GroupError):
    """Root extraction was asked for an element of finite order."""


class SyllableType(enum.Enum):
    G_EVEN = "G-even"
    H_EVEN = "H-even"
    G_ODD = "G-odd"
    H_ODD = "H-odd"
    IDENTITY = "identity"

    @property
    def is_odd(self) -> bool:
        return self in (SyllableType.G_ODD, SyllableType.H_ODD)

    @property
    def is_even(self) -> bool:
        return self in (SyllableType.G_EVEN, SyllableType.H_EVEN)


def syllable_length(word) -> int:
    return len(word)


@dataclass(frozen=True)
class PeriodicDecomposition:
    """Witness of (interior) periodicity.

    ``g`` and ``gamma`` are words of at most one letter.  For the left
    flavors the word reassembles as ``g * period^s * tail * gamma`` with
    ``g`` absorbed into the leading period letter; for the right flavors
    as ``g * tail * period^s * gamma`` with ``gamma`` absorbed into the
    final period letter (``tail`` then holds the head, a period suffix).
    ``extended_tail`` reports the alternative tail reading ``tail*gamma``
    whenever that is also a period prefix.
    """

    g: tuple
    period: tuple
    s: int
    tail: tuple
    gamma: tuple
    flavor: str
    extended_tail: Optional[tuple] = None

    @property
    def totally_periodic(self) -> bool:
        return self.flavor == "totally-periodic"

    def reassemble(self, group: "FreeProduct") -> tuple:
        body = group.pow(self.period, self.s)
        if self.flavor in ("interior-right-periodic", "right-periodic"):
            inner = group.mul(self.tail, body)
        else:
            inner = group.mul(body, self.tail)
        return group.mul(group.mul(self.g, inner), self.gamma)


class FreeProduct(Group):
    """Free product of two factor groups, acting on letter tuples."""

    kind = "free-product"

    def __init__(self, left: Group, right: Group) -> None:
        super().__init__()
        self.factors = (left, right)
        self.identity = ()
        for index, factor in enumerate(self.factors):
            for name, payload in factor.generators.items():
                if name in self.generators:
                    raise GroupLoadError(
                        f"generator name {name!r} appears in more than one factor"
                    )
                self.generators[name] = ((index, payload),)

    # -- arithmetic -------------------------------------------------------

    def letter(self, index: int, payload) -> tuple:
        if payload == self.factors[index].identity:
            return ()
        return ((index, payload),)

    def mul(self, x, y):
        if not x:
            return y
        if not y:
            return x
        xs = list(x)
        j = 0
        ny = len(y)
        while xs and j < ny:
            i, a = xs[-1]
            k, b = y[j]
            if i != k:
                break
            merged = self.factors[i].mul(a, b)
            j += 1
            if merged == self.factors[i].identity:
                xs.pop()
            else:
                xs[-1] = (i, merged)
                break
        xs.extend(y[j:])
        return tuple(xs)

    def inv(self, x):
        return tuple((i, self.factors[i].inv(a)) for i, a in reversed(x))

    def conjugate(self, gamma, x):
        return self.mul(self.mul(gamma, x), self.inv(gamma))

    def order(self, w):
        if not w:
            return 1
        _, core = self.cyclic_reduce(w)
        if len(core) >= 2:
            return None
        index, payload = core[0]
        return self.factors[index].order(payload)

    # -- bookkeeping ------------------------------------------------------

    def syllable_type(self, w) -> SyllableType:
        if not w:
            return SyllableType.IDENTITY
        first = w[0][0]
        if len(w) % 2:
            return SyllableType.G_ODD if first == 0 else SyllableType.H_ODD
        return SyllableType.G_EVEN if first == 0 else SyllableType.H_EVEN

    def cyclic_reduce(self, w):
        """Split ``w = c * core * c^-1`` with a cyclically reduced core."""
        conj: list = []
        cur = w
        while len(cur) >= 2 and cur[0][0] == cur[-1][0]:
            index, first = cur[0]
            factor = self.factors[index]
            merged = factor.mul(cur[-1][1], first)
            conj.append((index, first))
            if merged == factor.identity:
                cur = cur[1:-1]
            else:
                cur = cur[1:-1] + ((index, merged),)
        return tuple(conj), cur

    def primitive_root(self, w):
        """Return ``(root, k)`` with ``w = root^k`` and root not a proper power.

        Requires infinite order.  Roots of single letters are not refined
        further (factor backends expose no root structure), so a letter of
        infinite order is returned as its own root with k = 1.
        """
        conj, core = self.cyclic_reduce(w)
        if not core:
            raise FiniteOrderError("the identity has no primitive root")
        if len(core) == 1:
            index, payload = core[0]
            if self.factors[index].order(payload) is not None:
                raise FiniteOrderError("finite-order input has no primitive root")
            return w, 1
        length = len(core)
        conj_word = tuple(conj)
        for d in range(2, length + 1, 2):
            if length % d:
                continue
            if all(core[i] == core[i % d] for i in range(d, length)):
                root = self.mul(self.mul(conj_word, core[:d]), self.inv(conj_word))
                return root, length // d
        raise AssertionError("unreachable: d == length always tiles")

    # -- periodicity ------------------------------------------------------

    def period_decompose(self, w, from_right: bool = False):
        """Decompose ``w = p^s t`` (or ``h p^s`` from the right), else None.

        The period is the shortest one, hence primitive, and ``s >= 2`` is
        then maximal.  No interaction happens at any junction because the
        period is even, so the normal form of ``w`` literally tiles.
        """
        length = len(w)
        if length < 4:
            return None
        seq = tuple(reversed(w)) if from_right else w
        for d in range(2, length // 2 + 1, 2):
            if all(seq[i] == seq[i - d] for i in range(d, length)):
                s, r = divmod(length, d)
                if from_right:
                    return PeriodicDecomposition(
                        g=(),
                        period=w[length - d :],
                        s=s,
                        tail=w[:r],
                        gamma=(),
                        flavor="right-periodic",
                    )
                flavor = "totally-periodic" if r == 0 else "periodic"
                return PeriodicDecomposition(
                    g=(), period=w[:d], s=s, tail=w[:r], gamma=(), flavor=flavor
                )
        return None

    def interior_period_decompose(self, w, from_right: bool = False):
        """Interior periodicity witness for ``w``, or None.

        Even words defer to :meth:`period_decompose` (the notion agrees
        there).  For an odd word the mandatory outer letter is stripped,
        the remaining even part must tile except in its outermost letter,
        and the absorbed factor element is solved for exactly.
        """
        length = len(w)
        if length % 2 == 0:
            return self.period_decompose(w, from_right=from_right)
        if length < 5:
            return None
        if not from_right:
            outer = w[-1]
            z = w[:-1]
        else:
            outer = w[0]
            z = w[1:]
        n = len(z)
        index = w[0][0]
        factor = self.factors[index]
        for d in range(2, n // 2 + 1, 2):
            if not from_right:
                interior_ok = all(
                    z[i] == z[i % d] for i in range(1, n) if i % d
                )
                anchors = [z[i] for i in range(d, n, d)]
            else:
                interior_ok = all(
                    z[n - 1 - i] == z[n - 1 - (i % d)] for i in range(1, n) if i % d
                )
                anchors = [z[n - 1 - i] for i in range(d, n, d)]
            if not interior_ok or any(a != anchors[0] for a in anchors[1:]):
                continue
            ell = anchors[0]
            s, r = divmod(n, d)
            if not from_right:
                absorbed = factor.mul(z[0][1], factor.inv(ell[1]))
                period = (ell,) + z[1:d]
                tail = ((ell,) + z[1:r]) if r else ()
                g = () if absorbed == factor.identity else ((index, absorbed),)
                gamma = (outer,)
                extended = None
                if period[r] == outer:
                    extended = tail + (outer,)
                return PeriodicDecomposition(
                    g=g,
                    period=period,
                    s=s,
                    tail=tail,
                    gamma=gamma,
                    flavor="interior-periodic",
                    extended_tail=extended,
                )
            absorbed = factor.mul(factor.inv(ell[1]), z[-1][1])
            period = z[n - d : n - 1] + (ell,)
            head = z[:r] if r else ()
            gamma = () if absorbed == factor.identity else ((index, absorbed),)
            return PeriodicDecomposition(
                g=(outer,),
                period=period,
                s=s,
                tail=head,
                gamma=gamma,
                flavor="interior-right-periodic",
            )
        return None

    # -- text -------------------------------------------------------------

    def format_tokens(self, w):
        tokens: list[str] = []
        for index, payload in w:
            tokens.extend(self.factors[index].format_tokens(payload))
        return tokens

    def parse_element(self, obj):
        if not isinstance(obj, str):
            raise GroupLoadError(f"free-product element must be word text, got {obj!r}")
        return self.parse(obj)

    def element_to_json(self, w):
        return self.format(w)


def naive_reduce(group: FreeProduct, letters) -> tuple:
    """Reference normal-form reduction by repeated local rewriting.

    Deliberately independent of :meth:`FreeProduct.mul`: scan for any
    adjacent same-factor pair, merge or cancel it, and restart until no
    pair is left.  Used as the multiplication oracle in tests.
    """
    out = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(out) - 1):
            (f1, a), (f2, b) = out[i], out[i + 1]
            if f1 != f2:
                continue
            merged = group.factors[f1].mul(a, b)
            if merged == group.factors[f1].identity:
                del out[i : i + 2]
            else:
                out[i : i + 2] = [(f1, merged)]
            changed = True
            break
    return tuple(out)

"""Exact arithmetic backends for factor groups.

Every group is an object interpreting immutable element payloads:

- cyclic group of order n: residues ``0..n-1`` (0 is the identity)
- integers under addition: plain ints
- finite group given by a multiplication table: indices ``0..n-1``
  (index 0 is the identity by convention)
- SL(2,Z): matrices ``((a, b), (c, d))`` of exact ints, determinant 1
- Baumslag-Solitar group BS(m,n) = <x, y | y x^m y^-1 = x^n>: reduced
  alternating tuples ``(a0, e1, a1, ..., ek, ak)`` standing for
  ``x^a0 y^e1 x^a1 ... y^ek x^ak``
- direct product with the integers: pairs ``(component_payload, k)``

Payloads and group objects are never mutated, so they can be shared
freely across threads or worker processes; all operations are pure.

Element text syntax is uniform across backends: whitespace-separated
``name^exp`` tokens over the declared generator names (``e`` denotes the
identity), folded left to right through the group multiplication.
"""

from __future__ import annotations

import json
from math import gcd
from pathlib import Path

from .encoding import canonical_encode


class GroupError(Exception):
    pass


class GroupLoadError(GroupError):
    """A group description document is invalid."""


class WordParseError(GroupError):
    """Element text could not be parsed."""


class FormatError(GroupError):
    """An element is not expressible over the declared generators."""


def _split_token(token: str) -> tuple[str, int]:
    if "^" in token:
        name, _, exp = token.partition("^")
        try:
            return name, int(exp)
        except ValueError:
            raise WordParseError(f"malformed exponent in token {token!r}") from None
    return token, 1


def _payload_weight(obj) -> int:
    # crude monotone size measure, used to cut off diverging power searches
    if isinstance(obj, int):
        return abs(obj)
    return sum(_payload_weight(item) for item in obj) + len(obj)


class Group:
    """Common interface: exact group operations on immutable payloads."""

    kind = "abstract"
    identity = None

    def __init__(self) -> None:
        self.generators: dict[str, object] = {}

    # -- core arithmetic ------------------------------------------------

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def order(self, a):
        """Least k >= 1 with a^k = identity, or None when infinite."""
        raise NotImplementedError

    def pow(self, a, k: int):
        if k < 0:
            a, k = self.inv(a), -k
        result = self.identity
        while k:
            if k & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            k >>= 1
        return result

    def power_index(self, base, target, limit: int = 4096):
        """An integer k with base^k == target, or None if none is found.

        Exact: a returned k always satisfies the equation.  The search is
        bounded, so None is conclusive only for finite-order bases; for
        infinite backends a growth guard keeps the scan finite.
        """
        if target == self.identity:
            return 0
        if base == self.identity:
            return None
        order = self.order(base)
        if order is not None:
            limit = min(limit, order)
        fwd = bwd = self.identity
        base_inv = self.inv(base)
        target_weight = _payload_weight(target)
        for k in range(1, limit + 1):
            fwd = self.mul(fwd, base)
            if fwd == target:
                return k
            if fwd == self.identity:
                return None
            bwd = self.mul(bwd, base_inv)
            if bwd == target:
                return -k
            if (
                order is None
                and _payload_weight(fwd) > target_weight
                and _payload_weight(bwd) > target_weight
            ):
                return None
        return None

    # -- text syntax ----------------------------------------------------

    def parse(self, text: str):
        """Fold ``name^exp`` tokens through the group multiplication."""
        acc = self.identity
        for token in text.split():
            if token == "e":
                continue
            name, exp = _split_token(token)
            if name not in self.generators:
                raise WordParseError(f"unknown generator {name!r}")
            acc = self.mul(acc, self.pow(self.generators[name], exp))
        return acc

    def format_tokens(self, a) -> list[str]:
        raise NotImplementedError

    def format(self, a) -> str:
        tokens = self.format_tokens(a)
        return " ".join(tokens) if tokens else "e"

    # -- serialization --------------------------------------------------

    def encode(self, a) -> bytes:
        return canonical_encode(a)

    def sort_key(self, a):
        return canonical_encode(a)

    def parse_element(self, obj):
        """Build a payload from its JSON form."""
        raise NotImplementedError

    def element_to_json(self, a):
        raise NotImplementedError

    def _register_generators(self, entries) -> None:
        for entry in entries:
            name = entry["name"]
            if not name or name == "e" or any(ch.isspace() for ch in name) or "^" in name:
                raise GroupLoadError(f"invalid generator name {name!r}")
            if name in self.generators:
                raise GroupLoadError(f"duplicate generator name {name!r}")
            self.generators[name] = self.parse_element(entry["element"])


class CyclicGroup(Group):
    """Cyclic group of order n, written additively on residues."""

    kind = "cyclic"

    def __init__(self, n: int, generators=({"name": "t", "element": 1},)) -> None:
        super().__init__()
        if n <= 0:
            raise GroupLoadError("cyclic order must be positive")
        self.n = n
        self.identity = 0
        self._register_generators(generators)

    def mul(self, a, b):
        return (a + b) % self.n

    def inv(self, a):
        return (-a) % self.n

    def order(self, a):
        return 1 if a == 0 else self.n // gcd(self.n, a)

    def power_index(self, base, target, limit: int = 4096):
        # solve k*base = target (mod n) exactly
        g = gcd(base, self.n)
        if target % g:
            return None
        n1 = self.n // g
        k = (target // g) * pow(base // g, -1, n1) % n1 if n1 > 1 else 0
        return k if self.pow(base, k) == target else None

    def format_tokens(self, a):
        if a == 0:
            return []
        for name, g in self.generators.items():
            k = self.power_index(g, a)
            if k:
                return [name if k == 1 else f"{name}^{k}"]
        raise FormatError(f"residue {a} is not a generator power")

    def parse_element(self, obj):
        if not isinstance(obj, int) or isinstance(obj, bool):
            raise GroupLoadError(f"cyclic element must be an integer, got {obj!r}")
        return obj % self.n

    def element_to_json(self, a):
        return a


class IntegerGroup(Group):
    """The integers under addition."""

    kind = "integers"

    def __init__(self, generators=({"name": "a", "element": 1},)) -> None:
        super().__init__()
        self.identity = 0
        self._register_generators(generators)

    def mul(self, a, b):
        return a + b

    def inv(self, a):
        return -a

    def order(self, a):
        return 1 if a == 0 else None

    def power_index(self, base, target, limit: int = 4096):
        if base == 0:
            return 0 if target == 0 else None
        if target % base:
            return None
        return target // base

    def format_tokens(self, a):
        if a == 0:
            return []
        for name, g in self.generators.items():
            if g != 0 and a % g == 0:
                k = a // g
                return [name if k == 1 else f"{name}^{k}"]
        raise FormatError(f"integer {a} is not a generator power")

    def parse_element(self, obj):
        if not isinstance(obj, int) or isinstance(obj, bool):
            raise GroupLoadError(f"integer element expected, got {obj!r}")
        return obj

    def element_to_json(self, a):
        return a


class CayleyTableGroup(Group):
    """Finite group given by a full multiplication table on 0..n-1.

    The table is validated on construction: it must be a Latin square,
    index 0 must act as a two-sided identity, every element needs an
    inverse, and associativity is checked over all triples (the first
    violating triple is reported).
    """

    kind = "cayley-table"

    def __init__(self, table, generators=()) -> None:
        super().__init__()
        self.table = tuple(tuple(row) for row in table)
        self._validate()
        self.n = len(self.table)
        self.identity = 0
        self._inverses = tuple(row.index(0) for row in self.table)
        self._register_generators(generators)
        self._token_cache: dict[int, tuple[str, ...]] | None = None

    def _validate(self) -> None:
        table = self.table
        n = len(table)
        if n == 0 or any(len(row) != n for row in table):
            raise GroupLoadError("multiplication table must be square and non-empty")
        for i, row in enumerate(table):
            for j, v in enumerate(row):
                if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
                    raise GroupLoadError(f"table entry ({i},{j}) out of range: {v!r}")
        for i, row in enumerate(table):
            if len(set(row)) != n:
                raise GroupLoadError(f"not a Latin square: row {i} repeats an entry")
        for j in range(n):
            if len({table[i][j] for i in range(n)}) != n:
                raise GroupLoadError(f"not a Latin square: column {j} repeats an entry")
        for i in range(n):
            if table[0][i] != i or table[i][0] != i:
                raise GroupLoadError("index 0 is not a two-sided identity")
        for i, row in enumerate(table):
            j = row.index(0)
            if table[j][i] != 0:
                raise GroupLoadError(f"element {i} has no two-sided inverse")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if table[table[i][j]][k] != table[i][table[j][k]]:
                        raise GroupLoadError(
                            f"associativity fails at triple ({i},{j},{k})"
                        )

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inverses[a]

    def order(self, a):
        k, p = 1, a
        while p != 0:
            p = self.table[p][a]
            k += 1
        return k

    def _tokens_by_element(self) -> dict[int, tuple[str, ...]]:
        # shortest generator decompositions via breadth-first search
        if self._token_cache is None:
            cache: dict[int, tuple[str, ...]] = {0: ()}
            frontier = [0]
            steps = []
            for name, g in self.generators.items():
                steps.append((name, g))
                steps.append((f"{name}^-1", self.inv(g)))
            while frontier:
                new = []
                for a in frontier:
                    for token, g in steps:
                        b = self.table[a][g]
                        if b not in cache:
                            cache[b] = cache[a] + (token,)
                            new.append(b)
                frontier = new
            self._token_cache = cache
        return self._token_cache

    def format_tokens(self, a):
        cache = self._tokens_by_element()
        if a not in cache:
            raise FormatError(f"element {a} is not reachable from the generators")
        return list(cache[a])

    def parse_element(self, obj):
        if not isinstance(obj, int) or isinstance(obj, bool) or not 0 <= obj < self.n:
            raise GroupLoadError(f"table index expected in [0,{self.n}), got {obj!r}")
        return obj

    def element_to_json(self, a):
        return a


_SL2_ID = ((1, 0), (0, 1))
_SL2_S = ((0, -1), (1, 0))
_SL2_T = ((1, 1), (0, 1))


def sl2_mul(a, b):
    (a11, a12), (a21, a22) = a
    (b11, b12), (b21, b22) = b
    return (
        (a11 * b11 + a12 * b21, a11 * b12 + a12 * b22),
        (a21 * b11 + a22 * b21, a21 * b12 + a22 * b22),
    )


def sl2_det(a) -> int:
    (a11, a12), (a21, a22) = a
    return a11 * a22 - a12 * a21


class SL2ZGroup(Group):
    """SL(2,Z) with exact arbitrary-precision integer matrices."""

    kind = "sl2z"

    def __init__(
        self,
        generators=(
            {"name": "S", "element": [[0, -1], [1, 0]]},
            {"name": "T", "element": [[1, 1], [0, 1]]},
        ),
    ) -> None:
        super().__init__()
        self.identity = _SL2_ID
        self._register_generators(generators)

    def mul(self, a, b):
        return sl2_mul(a, b)

    def inv(self, a):
        (a11, a12), (a21, a22) = a
        return ((a22, -a12), (-a21, a11))

    def order(self, a):
        # finite orders in SL(2,Z) require |trace| <= 2; they all divide 12
        if abs(a[0][0] + a[1][1]) > 2:
            return None
        p = a
        for k in range(1, 13):
            if p == _SL2_ID:
                return k
            p = sl2_mul(p, a)
        return None

    def _st_names(self) -> tuple[str, str]:
        name_s = name_t = None
        for name, g in self.generators.items():
            if g == _SL2_S:
                name_s = name
            elif g == _SL2_T:
                name_t = name
        if name_s is None or name_t is None:
            raise FormatError("formatting needs the standard S and T generators")
        return name_s, name_t

    def format_tokens(self, a):
        name_s, name_t = self._st_names()
        tokens: list[str] = []
        prod = _SL2_ID
        for kind, q in _st_decompose(a):
            if kind == "S":
                tokens.append(name_s)
                prod = sl2_mul(prod, _SL2_S)
            elif q != 0:
                tokens.append(name_t if q == 1 else f"{name_t}^{q}")
                prod = sl2_mul(prod, ((1, q), (0, 1)))
        if prod != a:  # off by the central -1: append S^2
            tokens.append(f"{name_s}^2")
            prod = sl2_mul(prod, ((-1, 0), (0, -1)))
        if prod != a:
            raise FormatError("matrix decomposition failed")  # pragma: no cover
        return tokens

    def parse_element(self, obj):
        try:
            ((a, b), (c, d)) = obj
            m = ((int(a), int(b)), (int(c), int(d)))
        except (TypeError, ValueError):
            raise GroupLoadError(f"matrix [[a,b],[c,d]] expected, got {obj!r}") from None
        if sl2_det(m) != 1:
            raise GroupLoadError(f"matrix {m} has determinant {sl2_det(m)} != 1")
        return m

    def element_to_json(self, a):
        return [[a[0][0], a[0][1]], [a[1][0], a[1][1]]]


def _st_decompose(m):
    """Yield S / T^q steps whose product is m up to the central sign.

    Euclidean reduction on the left column: while c != 0, peel T^q S with
    q = a // c, which strictly shrinks |c|.
    """
    steps = []
    a = m
    while a[1][0] != 0:
        q = a[0][0] // a[1][0]
        steps.append(("T", q))
        steps.append(("S", 1))
        # a <- S^-1 T^-q a
        a = sl2_mul(((0, 1), (-1, 0)), sl2_mul(((1, -q), (0, 1)), a))
    # a is now +-T^b; the sign, if negative, is fixed later via S^2
    tail = a[0][1] if a[0][0] == 1 else -a[0][1]
    steps.append(("T", tail))
    return [(kind, q) for kind, q in steps if kind == "S" or q != 0]


class BaumslagSolitarGroup(Group):
    """BS(m,n) = <x, y | y x^m y^-1 = x^n> via reduced alternating words.

    Payloads are odd-length tuples ``(a0, e1, a1, ..., ek, ak)`` standing
    for ``x^a0 y^e1 x^a1 ... y^ek x^ak`` with every ``ei`` in {-1, +1}.
    The reduced form keeps the residue before each ``y`` in [0, |n|) and
    before each ``y^-1`` in [0, |m|), moving quotient powers rightwards by
    ``x^(qn+r) y -> x^r y x^(qm)`` and ``x^(qm+r) y^-1 -> x^r y^-1 x^(qn)``,
    and cancels ``y^-1 x^0 y`` / ``y x^0 y^-1`` pairs.  These forms are
    unique representatives, so tuple equality is group equality.
    """

    kind = "baumslag-solitar"

    def __init__(
        self,
        m: int,
        n: int,
        generators=({"name": "x", "element": "x"}, {"name": "y", "element": "y"}),
    ) -> None:
        super().__init__()
        if m == 0 or n == 0:
            raise GroupLoadError("BS(m,n) requires m != 0 and n != 0")
        self.m = m
        self.n = n
        self.identity = (0,)
        self.generators = {}
        for entry in generators:
            name = entry["name"]
            if name in self.generators:
                raise GroupLoadError(f"duplicate generator name {name!r}")
            self.generators[name] = self._parse_tokens(entry["element"])

    # -- reduction ------------------------------------------------------

    def _push_stable(self, buf: list, e: int) -> None:
        a = buf[-1]
        divisor = self.n if e > 0 else self.m
        r = a % abs(divisor)
        q = (a - r) // divisor
        carry = q * (self.m if e > 0 else self.n)
        if len(buf) >= 3 and buf[-2] == -e and r == 0:
            buf.pop()
            buf.pop()
            buf[-1] += carry
        else:
            buf[-1] = r
            buf.append(e)
            buf.append(carry)

    def _feed(self, buf: list, payload) -> None:
        buf[-1] += payload[0]
        for i in range(1, len(payload), 2):
            self._push_stable(buf, payload[i])
            buf[-1] += payload[i + 1]

    def mul(self, a, b):
        buf = list(a)
        self._feed(buf, b)
        return tuple(buf)

    def inv(self, a):
        buf = [-a[-1]]
        for i in range(len(a) - 2, 0, -2):
            self._push_stable(buf, -a[i])
            buf[-1] += -a[i - 1]
        return tuple(buf)

    def order(self, a):
        # BS(m,n) is an HNN extension of Z, hence torsion-free
        return 1 if a == (0,) else None

    # -- text -----------------------------------------------------------

    def _names(self) -> tuple[str, str]:
        name_x = name_y = None
        for name, g in self.generators.items():
            if g == (1,):
                name_x = name
            elif g == (0, 1, 0):
                name_y = name
        if name_x is None or name_y is None:
            raise FormatError("formatting needs the standard x and y generators")
        return name_x, name_y

    def format_tokens(self, a):
        name_x, name_y = self._names()
        tokens: list[str] = []

        def put_x(k):
            if k:
                tokens.append(name_x if k == 1 else f"{name_x}^{k}")

        put_x(a[0])
        for i in range(1, len(a), 2):
            tokens.append(name_y if a[i] == 1 else f"{name_y}^-1")
            put_x(a[i + 1])
        return tokens

    def _parse_tokens(self, text: str):
        buf = [0]
        for token in str(text).split():
            if token == "e":
                continue
            name, exp = _split_token(token)
            if name not in ("x", "y"):
                raise GroupLoadError(f"BS element tokens must use x/y, got {token!r}")
            if name == "x":
                buf[-1] += exp
            else:
                step = 1 if exp > 0 else -1
                for _ in range(abs(exp)):
                    self._push_stable(buf, step)
        return tuple(buf)

    def parse_element(self, obj):
        return self._parse_tokens(obj)

    def element_to_json(self, a):
        name_x, name_y = "x", "y"
        parts = []
        if a[0]:
            parts.append(f"x^{a[0]}" if a[0] != 1 else "x")
        for i in range(1, len(a), 2):
            parts.append("y" if a[i] == 1 else "y^-1")
            if a[i + 1]:
                parts.append(f"x^{a[i + 1]}" if a[i + 1] != 1 else "x")
        return " ".join(parts) if parts else "e"


class DirectProductWithIntegers(Group):
    """Direct product G x Z with componentwise multiplication.

    Payloads are pairs ``(g, k)``.  The integer part is generated by a
    dedicated central generator name.
    """

    kind = "direct-product-with-integers"

    def __init__(self, component: Group, z_name: str = "z") -> None:
        super().__init__()
        self.component = component
        self.identity = (component.identity, 0)
        if z_name in component.generators:
            raise GroupLoadError(f"central generator name {z_name!r} clashes")
        self.generators = {
            name: (g, 0) for name, g in component.generators.items()
        }
        self.generators[z_name] = (component.identity, 1)
        self.z_name = z_name

    def mul(self, a, b):
        return (self.component.mul(a[0], b[0]), a[1] + b[1])

    def inv(self, a):
        return (self.component.inv(a[0]), -a[1])

    def order(self, a):
        if a[1] != 0:
            return None
        return self.component.order(a[0])

    def format_tokens(self, a):
        tokens = self.component.format_tokens(a[0])
        if a[1]:
            tokens = tokens + [self.z_name if a[1] == 1 else f"{self.z_name}^{a[1]}"]
        return tokens

    def parse_element(self, obj):
        g, k = obj
        if not isinstance(k, int) or isinstance(k, bool):
            raise GroupLoadError(f"integer exponent expected, got {k!r}")
        return (self.component.parse_element(g), k)

    def element_to_json(self, a):
        return [self.component.element_to_json(a[0]), a[1]]


# -- group documents ------------------------------------------------------


def load_group(doc: dict) -> Group:
    """Build a validated group from its JSON description.

    ``{"kind": ..., "params": {...}, "generators": [{"name","element"}]}``.
    Free products list factor documents under ``params.factors``; n-ary
    products are nested as ((A*B)*C)*... with factor generator names
    required to be disjoint.
    """
    if not isinstance(doc, dict) or "kind" not in doc:
        raise GroupLoadError("group document must be an object with a 'kind'")
    kind = doc["kind"]
    params = doc.get("params", {})
    gens = doc.get("generators")
    if kind == "cyclic":
        if "n" not in params:
            raise GroupLoadError("cyclic group needs params.n")
        return CyclicGroup(params["n"], gens) if gens else CyclicGroup(params["n"])
    if kind == "integers":
        return IntegerGroup(gens) if gens else IntegerGroup()
    if kind == "cayley-table":
        table = params.get("table")
        if table is None and "csv" in params:
            table = _read_table_csv(params["csv"])
        if table is None:
            raise GroupLoadError("cayley-table group needs params.table or params.csv")
        return CayleyTableGroup(table, gens or ())
    if kind == "sl2z":
        return SL2ZGroup(gens) if gens else SL2ZGroup()
    if kind == "baumslag-solitar":
        if "m" not in params or "n" not in params:
            raise GroupLoadError("baumslag-solitar group needs params.m and params.n")
        if gens:
            return BaumslagSolitarGroup(params["m"], params["n"], gens)
        return BaumslagSolitarGroup(params["m"], params["n"])
    if kind == "direct-product-with-integers":
        if "component" not in params:
            raise GroupLoadError("direct product needs params.component")
        component = load_group(params["component"])
        return DirectProductWithIntegers(component, params.get("z_name", "z"))
    if kind == "free-product":
        factors = params.get("factors")
        if not factors or len(factors) < 2:
            raise GroupLoadError("free product needs at least two params.factors")
        from .words import FreeProduct

        group = FreeProduct(load_group(factors[0]), load_group(factors[1]))
        for extra in factors[2:]:
            group = FreeProduct(group, load_group(extra))
        return group
    raise GroupLoadError(f"unknown group kind {kind!r}")


def load_group_file(path) -> Group:
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise GroupLoadError(f"{path}: invalid JSON ({exc})") from None
    return load_group(doc)


def _read_table_csv(path) -> list[list[int]]:
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([int(cell) for cell in line.split(",")])
    return rows

"""Universes of separations and the systems living inside them.

A universe is a finite lattice with an order-reversing involution and an
optional exact order function; a separation system is an involution-closed
subset of one.  Everything downstream (orientations, tangles, trees of
tangles) treats the universe as an oracle for order and lattice queries,
so backends are free to compute by rule (bitmask bipartitions, graph
separations) or from explicit tables.

Oriented separations are plain hashable ids: ints for table universes,
int bitmasks of the first side for bipartition universes, (A, B) mask
pairs for the graph backend.  An unoriented separation is represented by
its canonical orientation, the sort_key-minimal one of the pair.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from .errors import InputError, UnsupportedOperationError


class Universe:
    """Finite lattice with order-reversing involution.  Subclass API."""

    has_order = False

    def invert(self, x):
        raise NotImplementedError

    def leq(self, x, y) -> bool:
        raise NotImplementedError

    def meet(self, x, y):
        raise NotImplementedError

    def join(self, x, y):
        raise NotImplementedError

    def order(self, x):
        raise UnsupportedOperationError("universe has no order function")

    def elements(self):
        """All oriented elements, canonically sorted.  Finite backends only."""
        raise UnsupportedOperationError("universe is not enumerable")

    def is_element(self, x) -> bool:
        raise NotImplementedError

    def sort_key(self, x):
        return x

    def format_element(self, x) -> str:
        return repr(x)

    # -- derived helpers, shared by all backends --

    def check_element(self, x):
        if not self.is_element(x):
            raise InputError(f"unknown element {x!r}")

    def lt(self, x, y) -> bool:
        return x != y and self.leq(x, y)

    def canon(self, x):
        """Canonical orientation of x's separation (sort_key-minimal)."""
        y = self.invert(x)
        return x if self.sort_key(x) <= self.sort_key(y) else y

    def comparable(self, x, y) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def nested(self, r, s) -> bool:
        """True iff some orientations of r and s are comparable."""
        self.check_element(r)
        self.check_element(s)
        return self.comparable(r, s) or self.comparable(r, self.invert(s))

    def corner_separations(self, r, s):
        """The up-to-four corner separations of r and s, unoriented.

        Returned as a sorted tuple of canonical orientations; invariant
        under swapping r and s and under reorienting either input.
        """
        self.check_element(r)
        self.check_element(s)
        rbar = self.invert(r)
        corners = {
            self.canon(self.join(r, s)),
            self.canon(self.meet(r, s)),
            self.canon(self.join(rbar, s)),
            self.canon(self.meet(rbar, s)),
        }
        return tuple(sorted(corners, key=self.sort_key))

    def format_pair(self, x) -> str:
        return f"{self.format_element(x)} | {self.format_element(self.invert(x))}"


def _as_order(v):
    # exact rationals only; floats would reintroduce tolerance questions
    if isinstance(v, float):
        raise InputError(f"order values must be int or Fraction, got float {v!r}")
    f = Fraction(v)
    if f < 0:
        raise InputError(f"order values must be non-negative, got {v!r}")
    return f


class TablePoset(Universe):
    """Universe given by explicit tables; validates all laws at load time.

    leq_pairs may be any relation whose reflexive-transitive closure is the
    intended partial order (closed by default).  Meets and joins are
    computed as glb/lub; a pair without one makes the input not a lattice
    and is rejected.
    """

    def __init__(self, n, involution, leq_pairs, order=None, names=None, close=True):
        if n <= 0:
            raise InputError("table universe needs at least one element")
        self.n = n
        self._names = list(names) if names is not None else None
        if self._names is not None and len(self._names) != n:
            raise InputError("names list does not match element count")

        inv = tuple(involution)
        if sorted(inv) != list(range(n)):
            raise InputError("involution is not a permutation of the elements")
        if any(inv[inv[i]] != i for i in range(n)):
            raise InputError("involution is not self-inverse")
        self._inv = inv

        down = [1 << i for i in range(n)]  # down[i] = bitmask of j with j <= i
        for i, j in leq_pairs:
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f"leq pair ({i},{j}) out of range")
            down[j] |= 1 << i
        if close:
            changed = True
            while changed:
                changed = False
                for j in range(n):
                    acc = down[j]
                    m = acc
                    while m:
                        b = m & -m
                        acc |= down[b.bit_length() - 1]
                        m ^= b
                    if acc != down[j]:
                        down[j] = acc
                        changed = True
        self._down = down
        self._validate_poset()

        self._meet = [[self._glb(i, j) for j in range(n)] for i in range(n)]
        self._up = [0] * n
        for j in range(n):
            m = down[j]
            while m:
                b = m & -m
                self._up[b.bit_length() - 1] |= 1 << j
                m ^= b
        self._join = [[self._lub(i, j) for j in range(n)] for i in range(n)]

        if order is not None:
            self._order = tuple(_as_order(v) for v in order)
            if len(self._order) != n:
                raise InputError("order table does not match element count")
            for i in range(n):
                if self._order[i] != self._order[inv[i]]:
                    raise InputError(
                        f"order not invariant under involution at element {i}"
                    )
            self.has_order = True
        else:
            self._order = None

        self._validate_involution_and_demorgan()

    # -- load-time law checks --

    def _validate_poset(self):
        n, down = self.n, self._down
        for i in range(n):
            if not down[i] >> i & 1:
                raise InputError("leq not reflexive")  # unreachable when closed
        for i in range(n):
            for j in range(n):
                if i != j and down[i] >> j & 1 and down[j] >> i & 1:
                    raise InputError(f"leq not antisymmetric on ({i},{j})")
        for j in range(n):
            acc = 0
            m = down[j]
            while m:
                b = m & -m
                acc |= down[b.bit_length() - 1]
                m ^= b
            if acc != down[j]:
                raise InputError(f"leq not transitive below element {j}")

    def _glb(self, i, j):
        lower = self._down[i] & self._down[j]
        m = lower
        while m:
            b = m & -m
            g = b.bit_length() - 1
            if lower & ~self._down[g] == 0:
                return g
            m ^= b
        raise InputError(f"elements {i} and {j} have no meet: not a lattice")

    def _lub(self, i, j):
        upper = self._up[i] & self._up[j]
        m = upper
        while m:
            b = m & -m
            g = b.bit_length() - 1
            if upper & ~self._up[g] == 0:
                return g
            m ^= b
        raise InputError(f"elements {i} and {j} have no join: not a lattice")

    def _validate_involution_and_demorgan(self):
        inv = self._inv
        for i in range(self.n):
            for j in range(self.n):
                if self.leq(i, j) and not self.leq(inv[j], inv[i]):
                    raise InputError(
                        f"involution not order-reversing on ({i},{j})"
                    )
        for i in range(self.n):
            for j in range(self.n):
                if inv[self._join[i][j]] != self._meet[inv[i]][inv[j]]:
                    raise InputError(f"De Morgan identity fails on ({i},{j})")

    # -- Universe API --

    def invert(self, x):
        self.check_element(x)
        return self._inv[x]

    def leq(self, x, y):
        return self._down[y] >> x & 1 == 1

    def meet(self, x, y):
        self.check_element(x)
        self.check_element(y)
        return self._meet[x][y]

    def join(self, x, y):
        self.check_element(x)
        self.check_element(y)
        return self._join[x][y]

    def order(self, x):
        if self._order is None:
            raise UnsupportedOperationError("table universe has no order function")
        self.check_element(x)
        return self._order[x]

    def elements(self):
        return tuple(range(self.n))

    def is_element(self, x):
        return isinstance(x, int) and 0 <= x < self.n

    def format_element(self, x):
        return self._names[x] if self._names else f"e{x}"

    def name_of(self, x):
        self.check_element(x)
        return self.format_element(x)

    def id_of(self, name):
        if self._names is not None and name in self._names:
            return self._names.index(name)
        if isinstance(name, str) and name.startswith("e"):
            try:
                return int(name[1:])
            except ValueError:
                pass
        raise InputError(f"unknown element name {name!r}")


class BipartitionUniverse(Universe):
    """All bipartitions of a named ground set, as first-side bitmasks.

    (A ->) <= (B ->) iff A is a subset of B; the involution complements.
    Meet and join are intersection and union, so every lattice law holds
    by construction.  An optional order function maps masks to exact
    non-negative rationals and must be symmetric under complement.
    """

    def __init__(self, ground, order_fn=None):
        ground = tuple(ground)
        if not ground:
            raise InputError("ground set must be nonempty")
        if len(set(ground)) != len(ground):
            raise InputError("ground set has repeated names")
        if len(ground) > 24:
            raise InputError("ground set larger than the 24-point cap")
        self.ground = ground
        self.full = (1 << len(ground)) - 1
        self._order_fn = order_fn
        self.has_order = order_fn is not None
        if self.has_order:
            for a in range(self.full + 1):
                v = _as_order(order_fn(a))
                if v != _as_order(order_fn(self.full ^ a)):
                    raise InputError(
                        f"order not invariant under complement at mask {a:#x}"
                    )

    def invert(self, x):
        self.check_element(x)
        return self.full ^ x

    def leq(self, x, y):
        return x & ~y == 0

    def meet(self, x, y):
        self.check_element(x)
        self.check_element(y)
        return x & y

    def join(self, x, y):
        self.check_element(x)
        self.check_element(y)
        return x | y

    def order(self, x):
        if self._order_fn is None:
            raise UnsupportedOperationError("bipartition universe has no order")
        self.check_element(x)
        return _as_order(self._order_fn(x))

    def elements(self):
        return tuple(range(self.full + 1))

    def is_element(self, x):
        return isinstance(x, int) and 0 <= x <= self.full

    def mask_of(self, names):
        m = 0
        for nm in names:
            try:
                m |= 1 << self.ground.index(nm)
            except ValueError:
                raise InputError(f"unknown ground point {nm!r}") from None
        return m

    def names_of(self, mask):
        return tuple(g for i, g in enumerate(self.ground) if mask >> i & 1)

    def format_element(self, x):
        return "{" + ",".join(self.names_of(x)) + "}"


@dataclass(frozen=True)
class SepFlags:
    """Classification of one oriented separation within a system."""

    degenerate: bool
    small: bool
    cosmall: bool
    trivial: bool
    trivial_witness: object = None  # canonical id of a witnessing separation


class SeparationSystem:
    """Involution-closed set of oriented elements of one universe.

    len() counts unoriented separations.  All derived listings are sorted
    by the universe's sort_key so downstream output is deterministic.
    """

    def __init__(self, universe, members):
        mem = frozenset(members)
        for x in mem:
            universe.check_element(x)
            if universe.invert(x) not in mem:
                raise InputError(
                    f"members not closed under involution: missing inverse of "
                    f"{universe.format_element(x)}"
                )
        self.universe = universe
        self.members = mem

    @classmethod
    def from_unoriented(cls, universe, seps):
        mem = set()
        for s in seps:
            mem.add(s)
            mem.add(universe.invert(s))
        return cls(universe, mem)

    def __contains__(self, x):
        return x in self.members

    def __len__(self):
        return len(self.separations)

    def __eq__(self, other):
        return (
            isinstance(other, SeparationSystem)
            and self.universe is other.universe
            and self.members == other.members
        )

    def __hash__(self):
        return hash((id(self.universe), self.members))

    @cached_property
    def oriented(self):
        return tuple(sorted(self.members, key=self.universe.sort_key))

    @cached_property
    def separations(self):
        """Canonical orientations, one per unoriented separation."""
        U = self.universe
        return tuple(
            sorted({U.canon(x) for x in self.members}, key=U.sort_key)
        )

    def check_member(self, x):
        if x not in self.members:
            raise InputError(
                f"{self.universe.format_element(x)} is not in the system"
            )

    # -- positional index and bit tables (built on demand) --

    @cached_property
    def pos(self):
        return {x: i for i, x in enumerate(self.oriented)}

    @cached_property
    def inv_pos(self):
        U = self.universe
        return tuple(self.pos[U.invert(x)] for x in self.oriented)

    @cached_property
    def up_bits(self):
        """up_bits[i] has bit j set iff oriented[i] <= oriented[j]."""
        U = self.universe
        elems = self.oriented
        n = len(elems)
        rows = []
        for i in range(n):
            m = 0
            for j in range(n):
                if U.leq(elems[i], elems[j]):
                    m |= 1 << j
            rows.append(m)
        return tuple(rows)

    @cached_property
    def strict_up_bits(self):
        return tuple(m & ~(1 << i) for i, m in enumerate(self.up_bits))

    @cached_property
    def conflict_bits(self):
        """conflict_bits[i]: positions j whose joint choice is inconsistent.

        Choosing a and b from distinct separations is inconsistent exactly
        when invert(a) < b; the relation is symmetric because the
        involution is order-reversing.
        """
        out = []
        for i in range(len(self.oriented)):
            m = self.strict_up_bits[self.inv_pos[i]]
            m &= ~(1 << i)  # same separation is never a consistency conflict
            out.append(m)
        return tuple(out)

    # -- predicates --

    def classify(self, x) -> SepFlags:
        self.check_member(x)
        U = self.universe
        xbar = U.invert(x)
        degenerate = x == xbar
        small = U.leq(x, xbar)
        cosmall = U.leq(xbar, x)
        trivial = False
        witness = None
        for y in self.oriented:
            if U.lt(x, y) and U.lt(x, U.invert(y)):
                trivial = True
                witness = U.canon(y)
                break
        return SepFlags(degenerate, small, cosmall, trivial, witness)

    def trivial_members(self):
        """Oriented members that are trivial in the system, sorted."""
        return tuple(x for x in self.oriented if self.classify(x).trivial)

    def small_members(self):
        U = self.universe
        return tuple(x for x in self.oriented if U.leq(x, U.invert(x)))

    def submodular_violation(self):
        """First oriented pair with neither meet nor join in the system."""
        U = self.universe
        mem = self.members
        elems = self.oriented
        for i, r in enumerate(elems):
            for s in elems[i:]:
                if U.join(r, s) not in mem and U.meet(r, s) not in mem:
                    return (r, s)
        return None

    def is_submodular(self) -> bool:
        return self.submodular_violation() is None

    def nestedness_violation(self, seps):
        """First crossing pair among the given unoriented separations."""
        U = self.universe
        for r, s in combinations(sorted(seps, key=U.sort_key), 2):
            if not U.nested(r, s):
                return (r, s)
        return None

    def restrict_nested(self, M):
        """Subsystem of members nested with every separation in M."""
        U = self.universe
        for m in M:
            self.check_member(m)
        sub = [
            x
            for x in self.oriented
            if all(U.nested(x, m) for m in M)
        ]
        return SeparationSystem(self.universe, sub)


def order_filtered_system(universe, k, within=None) -> SeparationSystem:
    """The system of all universe elements of order strictly below k.

    Pass within to filter an existing system instead of the full universe.
    """
    if not universe.has_order:
        raise UnsupportedOperationError("order filter needs an order function")
    if k <= 0:
        raise InputError("order threshold must be positive")
    pool = universe.elements() if within is None else within.oriented
    return SeparationSystem(
        universe, [x for x in pool if universe.order(x) < k]
    )


def order_submodularity_violation(universe, elems=None):
    """First pair violating |r v s| + |r ^ s| <= |r| + |s|, else None."""
    if not universe.has_order:
        raise UnsupportedOperationError(
            "order submodularity needs an order function"
        )
    if elems is None:
        elems = universe.elements()
    elems = sorted(elems, key=universe.sort_key)
    for i, r in enumerate(elems):
        for s in elems[i:]:
            lhs = universe.order(universe.join(r, s)) + universe.order(
                universe.meet(r, s)
            )
            if lhs > universe.order(r) + universe.order(s):
                return (r, s)
    return None


def check_order_submodular(universe, elems=None) -> bool:
    return order_submodularity_violation(universe, elems) is None


def verify_universe_laws(universe, elems=None):
    """Exhaustively assert poset, involution, lattice and De Morgan laws.

    Intended for tests and for validating rule-based backends at small
    scale; TablePoset runs the same checks at load time.
    """
    U = universe
    if elems is None:
        elems = U.elements()
    elems = list(elems)
    for x in elems:
        assert U.leq(x, x), "leq not reflexive"
        assert U.invert(U.invert(x)) == x, "involution not self-inverse"
    for x in elems:
        for y in elems:
            if U.leq(x, y) and U.leq(y, x):
                assert x == y, "leq not antisymmetric"
            if U.leq(x, y):
                assert U.leq(U.invert(y), U.invert(x)), "involution not order-reversing"
            m, j = U.meet(x, y), U.join(x, y)
            assert U.leq(m, x) and U.leq(m, y), "meet not a lower bound"
            assert U.leq(x, j) and U.leq(y, j), "join not an upper bound"
            assert U.invert(j) == U.meet(U.invert(x), U.invert(y)), "De Morgan fails"
            if U.has_order:
                assert U.order(x) == U.order(U.invert(x)), "order not symmetric"
    for x in elems:
        for y in elems:
            for z in elems:
                if U.leq(x, y) and U.leq(y, z):
                    assert U.leq(x, z), "leq not transitive"
                if U.leq(z, x) and U.leq(z, y):
                    assert U.leq(z, U.meet(x, y)), "meet not greatest"
                if U.leq(x, z) and U.leq(y, z):
                    assert U.leq(U.join(x, y), z), "join not least"

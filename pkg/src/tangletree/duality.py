"""Emulation, the shift map, closure under shifting, separability, and
the tangle-vs-tree duality decision.

The duality search is a least-fixpoint computation: cover(x) holds when
some family star containing x has all of its other members' inverses
covered, and an S-tree over F exists iff some star has every member's
inverse covered.  This is sound and complete for tree existence on any
finite family of stars, so the dichotomy theorem itself is only needed
to promise that one of the two branches must materialise.
"""

from dataclasses import dataclass

from .config import DEFAULT_CAPS
from .errors import (
    InputError,
    IntegrityError,
    ResourceCapError,
)
from . import orient
from .orient import StarFamily
from .trees import STree, irredundant_reduction


def ge_members(S, r):
    """Oriented members of S_(>=r): an orientation of their separation
    lies above r."""
    U = S.universe
    out = []
    for x in S.oriented:
        if U.leq(r, x) or U.leq(r, U.invert(x)):
            out.append(x)
    return tuple(out)


def emulation_violation(S, s, r):
    """None if s emulates r in S; otherwise the first witness.

    Witness shapes: ("not-geq", r) when s is not above r, else
    ("join-escapes", x) for the first x >= r (x != invert(r)) whose join
    with s leaves the system.
    """
    U = S.universe
    S.check_member(s)
    S.check_member(r)
    flags = S.classify(r)
    if flags.degenerate or flags.trivial:
        raise InputError("emulation base must be neither trivial nor degenerate")
    if not U.leq(r, s):
        return ("not-geq", r)
    rbar = U.invert(r)
    for x in S.oriented:
        if x == rbar or not U.leq(r, x):
            continue
        if U.join(s, x) not in S.members:
            return ("join-escapes", x)
    return None


def emulates(S, s, r) -> bool:
    return emulation_violation(S, s, r) is None


@dataclass(frozen=True)
class ShiftMap:
    """f-down for a base r and target s with s >= r emulating r."""

    system: object
    base: object
    target: object

    def __post_init__(self):
        bad = emulation_violation(self.system, self.target, self.base)
        if bad is not None:
            raise InputError(f"target does not emulate base: {bad}")

    def domain_contains(self, x) -> bool:
        U = self.system.universe
        return U.leq(self.base, x) or U.leq(self.base, U.invert(x))

    def apply(self, x):
        U = self.system.universe
        r, s = self.base, self.target
        rbar = U.invert(r)
        if x != rbar and U.leq(r, x):
            img = U.join(x, s)
        elif U.leq(r, U.invert(x)):
            img = U.invert(U.join(U.invert(x), s))
        else:
            raise InputError(
                f"{U.format_element(x)} is outside the shift domain"
            )
        if img not in self.system.members:
            raise IntegrityError(
                "shift image escaped the system despite emulation"
            )
        return img

    def apply_star(self, sigma):
        return frozenset(self.apply(x) for x in sigma)


def star_in_shift_scope(S, sigma, r):
    """True iff sigma lies in S_(>=r) minus invert(r) and touches above r."""
    U = S.universe
    rbar = U.invert(r)
    touches = False
    for x in sigma:
        if x == rbar:
            return False
        above = U.leq(r, x)
        if not above and not U.leq(r, U.invert(x)):
            return False
        if above:
            touches = True
    return touches


def emulation_for_family_violation(S, s, r, family):
    """None if s emulates r in S for the family; else the offending star."""
    bad = emulation_violation(S, s, r)
    if bad is not None:
        raise InputError(f"emulation precondition fails: {bad}")
    shift = ShiftMap(S, r, s)
    for sigma in family.stars_sorted:
        if not star_in_shift_scope(S, sigma, r):
            continue
        if shift.apply_star(sigma) not in family.stars:
            return sigma
    return None


def emulates_for_family(S, s, r, family) -> bool:
    return emulation_for_family_violation(S, s, r, family) is None


def shifting_closure_violation(S, family):
    """First (s, r, star) with s emulating r but not for the family."""
    U = S.universe
    for r in S.oriented:
        flags = S.classify(r)
        if flags.degenerate or flags.trivial:
            continue
        for s in S.oriented:
            if not U.leq(r, s) or not emulates(S, s, r):
                continue
            sigma = emulation_for_family_violation(S, s, r, family)
            if sigma is not None:
                return (s, r, sigma)
    return None


def check_closed_under_shifting(S, family) -> bool:
    ok = shifting_closure_violation(S, family) is None
    family.closed_under_shifting = ok if ok else False
    return ok


def shift_stree(T: STree, r, s, family) -> STree:
    """Relabel a tight irredundant S-tree through the shift onto s.

    r must be a leaf separation of T labelling no other edge, and s must
    emulate r in S for the family; the result is an S-tree over
    family + {{invert(s)}} with that singleton at a unique leaf.
    """
    S = T.system
    U = S.universe
    rep = T.validate(family)
    if not rep.all_good(need_family=family is not None):
        raise InputError(f"tree is not tight/irredundant over the family: {rep}")
    if r not in T.leaf_separations():
        raise InputError("shift base is not a leaf separation")
    uses = [e for e, lab in T.alpha.items() if lab == r]
    if len(uses) != 1:
        raise InputError("shift base labels more than one edge")
    shift = ShiftMap(S, r, s)
    if family is not None:
        bad = emulation_for_family_violation(S, s, r, family)
        if bad is not None:
            raise InputError(f"target does not emulate base for the family: {bad}")
    alpha2 = {e: shift.apply(lab) for e, lab in T.alpha.items()}
    out = STree(S, T.n, alpha2)
    sbar = frozenset((U.invert(s),))
    hits = [v for v in range(out.n) if out.star_at(v) == sbar]
    if len(hits) != 1 or len(out.adj[hits[0]]) != 1:
        raise IntegrityError(
            "shifted tree does not show the new singleton at a unique leaf"
        )
    return out


# -- the duality decision --


@dataclass
class DualityResult:
    kind: str  # "tangle" | "tree"
    tangle: object = None
    tree: object = None


def _cover_fixpoint(S, family):
    """Least fixpoint of the cover relation; returns (covered info, roots).

    covered maps an oriented id to (witness star, time); roots is the set
    of stars whose members' inverses are all covered.
    """
    U = S.universe
    stars = family.stars_sorted
    by_member = {}
    for si, sigma in enumerate(stars):
        for x in sigma:
            by_member.setdefault(x, []).append(si)
    need = [len(sigma) for sigma in stars]
    covered = {}
    queue = []
    roots = set()
    clock = [0]

    def fire(x, si):
        if x in covered:
            return
        covered[x] = (si, clock[0])
        clock[0] += 1
        queue.append(x)

    def examine(si):
        sigma = stars[si]
        if need[si] == 0:
            roots.add(si)
            for x in sigma:
                fire(x, si)
        elif need[si] == 1:
            for x in sigma:
                if U.invert(x) not in covered:
                    fire(x, si)
                    break

    for si in range(len(stars)):
        examine(si)
    head = 0
    while head < len(queue):
        y = queue[head]
        head += 1
        for si in by_member.get(U.invert(y), ()):
            need[si] -= 1
            examine(si)
    return stars, covered, roots


def _tree_from_cover(S, family, stars, covered, roots, caps):
    """Rebuild an S-tree over the family from cover certificates."""
    root_si = min(roots, key=lambda si: family.star_key(stars[si]))
    U = S.universe
    alpha = {}
    counter = [0]

    def new_vertex():
        v = counter[0]
        counter[0] += 1
        if v >= caps.max_tree_nodes:
            raise ResourceCapError(
                f"reconstructed tree exceeds {caps.max_tree_nodes} nodes"
            )
        return v

    def build(x, parent):
        """Vertex for cover(x), whose star receives x from the parent."""
        si, t = covered[x]
        v = new_vertex()
        alpha[(parent, v)] = x
        alpha[(v, parent)] = U.invert(x)
        for w in sorted(stars[si] - {x}, key=U.sort_key):
            wbar = U.invert(w)
            if covered[wbar][1] >= t:
                raise IntegrityError("cover certificates are not stratified")
            build(wbar, v)
        return v

    root = new_vertex()
    for w in sorted(stars[root_si], key=U.sort_key):
        build(U.invert(w), root)
    return STree(S, counter[0], alpha)


def duality_decide(S, family: StarFamily, caps=DEFAULT_CAPS, verify=True) -> DualityResult:
    """Produce an F-tangle or an S-tree over F, never both claims.

    With verify=True the preconditions of the duality theorem are checked
    where affordable (submodularity always; closure under shifting unless
    the family carries a trusted flag or the system is too large).
    """
    if not family.stars_only:
        raise InputError("duality needs a family made of stars")
    U = S.universe
    if verify:
        pair = S.submodular_violation()
        if pair is not None:
            raise InputError(
                f"system is not submodular: {U.format_element(pair[0])}, "
                f"{U.format_element(pair[1])}"
            )
        for x in S.trivial_members():
            if frozenset((U.invert(x),)) not in family.stars:
                raise InputError("family is not standard (missing a trivial "
                                 f"singleton for {U.format_element(x)})")
        if family.closed_under_shifting is None:
            if len(S) <= caps.full_shift_check_limit:
                if not check_closed_under_shifting(S, family):
                    raise InputError("family is not closed under shifting")
            else:
                raise InputError(
                    "closure under shifting unknown and the system is too "
                    "large to verify; set the family flag explicitly"
                )
        elif family.closed_under_shifting is False:
            raise InputError("family is not closed under shifting")

    tangles = orient.enumerate_tangles(S, family, caps)
    if tangles:
        return DualityResult("tangle", tangle=tangles[0])

    stars, covered, roots = _cover_fixpoint(S, family)
    if not roots:
        raise IntegrityError(
            "neither a tangle nor an S-tree exists; duality preconditions "
            "must have been violated"
        )
    tree = _tree_from_cover(S, family, stars, covered, roots, caps)
    tree = irredundant_reduction(tree, keep=(), family=family)
    rep = tree.validate(family)
    if rep.over_f is not True:
        raise IntegrityError(f"constructed tree is not over the family: {rep}")
    return DualityResult("tree", tree=tree)


# -- separability --


def separability_violation(S):
    """First comparable pair (s, r) with no t between them such that t
    emulates s and invert(t) emulates invert(r)."""
    U = S.universe
    elems = S.oriented
    for s in elems:
        fs = S.classify(s)
        if fs.degenerate or fs.trivial:
            continue
        for r in elems:
            if not U.leq(s, r):
                continue
            fr = S.classify(U.invert(r))
            if fr.degenerate or fr.trivial:
                continue
            ok = False
            for t in elems:
                if not (U.leq(s, t) and U.leq(t, r)):
                    continue
                if emulates(S, t, s) and emulates(S, U.invert(t), U.invert(r)):
                    ok = True
                    break
            if not ok:
                return (s, r)
    return None


def check_separable(S) -> bool:
    return separability_violation(S) is None

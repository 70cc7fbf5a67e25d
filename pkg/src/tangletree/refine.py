"""Refining a tree of tangles so that inessential locations split.

The key relation is close relationship: s is closely related to a
profile P when s lies in P and its meet with every member of P stays in
the system.  Close relationship buys emulation, emulation buys shifts,
and shifts turn the tree produced by the duality machine into one whose
leaves realise exactly the members of the star being refined.
"""

from dataclasses import dataclass

from .config import DEFAULT_CAPS
from .errors import DomainError, InputError, IntegrityError
from . import duality, orient, trees
from .trees import NestedSet, STree


def closely_related_violation(S, s, P):
    """None if s is closely related to P, else a witness.

    ("not-member",) when s is not in P; otherwise ("meet-escapes", r)
    for the first member r of P whose meet with s leaves the system.
    """
    U = S.universe
    S.check_member(s)
    Pset = frozenset(P)
    if s not in Pset:
        return ("not-member",)
    for r in sorted(Pset, key=U.sort_key):
        if U.meet(s, r) not in S.members:
            return ("meet-escapes", r)
    return None


def closely_related(S, s, P) -> bool:
    return closely_related_violation(S, s, P) is None


def maximal_in(S, P):
    """The maximal elements of an orientation; for profiles these are
    always closely related to it."""
    return orient.maximal_members(S, P)


def good(S, s, profiles) -> bool:
    """True iff the orientations of s are closely related to two
    distinct profiles from the collection."""
    U = S.universe
    S.check_member(s)
    x, y = s, U.invert(s)
    plist = list(profiles)
    for i, P in enumerate(plist):
        for j, Q in enumerate(plist):
            if i == j:
                continue
            if closely_related(S, x, P) and closely_related(S, y, Q):
                return True
    return False


def distinguishes_well(S, s, P1, P2) -> bool:
    """One orientation closely related to P1, the other to P2."""
    U = S.universe
    S.check_member(s)
    if frozenset(P1) == frozenset(P2):
        raise InputError("needs two distinct profiles")
    x, y = s, U.invert(s)
    if closely_related(S, x, P1) and closely_related(S, y, P2):
        return True
    return closely_related(S, y, P1) and closely_related(S, x, P2)


@dataclass(frozen=True)
class CloseWitness:
    """A separation together with a profile it is closely related to."""

    separation: object
    profile: frozenset


def guarded_inf(S, s, witnesses, close_to=None):
    """The infimum of s with the witness separations, kept honest.

    Every witness profile must contain s and be closely related to its
    separation; then the infimum is guaranteed to lie in the system, so
    an escape is a bug upstream, not bad input.  close_to asks for a
    closeness post-check against one more profile.
    """
    U = S.universe
    S.check_member(s)
    ws = sorted(witnesses, key=lambda w: U.sort_key(w.separation))
    for w in ws:
        if s not in w.profile:
            raise InputError("witness profile does not contain the base")
        bad = closely_related_violation(S, w.separation, w.profile)
        if bad is not None:
            raise InputError(f"witness is not closely related: {bad}")
    inf = s
    for w in ws:
        inf = U.meet(inf, w.separation)
    if inf not in S.members:
        raise IntegrityError(
            "guarded infimum escaped the system; a precondition upstream "
            "was not what it claimed"
        )
    if close_to is not None:
        bad = closely_related_violation(S, inf, close_to)
        if bad is not None:
            raise IntegrityError(f"infimum is not closely related: {bad}")
    return inf


# -- star refinement --


def witnesses_for_star(S, sigma, tangles):
    """For each member of sigma (sorted), a tangle that contains and is
    closely related to its inverse.  DomainError when a member has none:
    such a star cannot be refined."""
    U = S.universe
    out = []
    for s in sorted(sigma, key=U.sort_key):
        sbar = U.invert(s)
        found = None
        for O in tangles:
            if sbar in O and closely_related(S, sbar, O):
                found = O
                break
        if found is None:
            raise DomainError(
                f"no tangle is closely related to {U.format_element(sbar)}"
            )
        out.append(found)
    return out


def _home_vertex(T: STree, O):
    """The first vertex all of whose incoming labels lie in O."""
    for v in range(T.n):
        if all(T.alpha[(u, v)] in O for u in T.adj[v]):
            return v
    raise IntegrityError("consistent orientation admits no sink in the tree")


def _family_preconditions(S, family, caps):
    U = S.universe
    if not family.stars_only:
        raise InputError("refinement needs a family made of stars")
    pair = S.submodular_violation()
    if pair is not None:
        raise InputError(
            f"system is not submodular: {U.format_element(pair[0])}, "
            f"{U.format_element(pair[1])}"
        )
    for x in S.trivial_members():
        if frozenset((U.invert(x),)) not in family.stars:
            raise InputError(
                f"family is not standard: no singleton for "
                f"{U.format_element(U.invert(x))}"
            )
    for x in S.small_members():
        if frozenset((U.invert(x),)) not in family.stars:
            raise InputError(
                f"family lacks the regularity singleton for "
                f"{U.format_element(U.invert(x))}"
            )
    if family.closed_under_shifting is None:
        if len(S) <= caps.full_shift_check_limit:
            if not duality.check_closed_under_shifting(S, family):
                raise InputError("family is not closed under shifting")
        else:
            raise InputError(
                "closure under shifting unknown and the system is too large "
                "to verify; set the family flag explicitly"
            )
    elif family.closed_under_shifting is False:
        raise InputError("family is not closed under shifting")


def refine_star(S, sigma, family, witnesses=None, tangles=None, caps=DEFAULT_CAPS, trace=None) -> STree:
    """An S-tree over family + inverse singletons of sigma, with every
    member of sigma among its leaf separations.

    sigma must be a star orienting distinct separations that no tangle
    of the family contains, and each member's inverse must be closely
    related to some tangle (supplied as witnesses or discovered here).
    """
    U = S.universe
    sigma = frozenset(sigma)
    if not sigma:
        raise InputError("cannot refine an empty star")
    bad = orient.star_violation(U, sigma)
    if bad is not None:
        raise InputError(f"not a star: {bad}")
    members = sorted(sigma, key=U.sort_key)
    if len({U.canon(x) for x in members}) != len(members):
        raise InputError("star members must orient distinct separations")
    _family_preconditions(S, family, caps)

    if tangles is None:
        tangles = orient.enumerate_tangles(S, family, caps)
    if not tangles:
        raise DomainError("the family has no tangles; nothing to refine")
    for O in tangles:
        if sigma <= frozenset(O):
            raise DomainError("star is essential: a tangle contains it")

    if witnesses is None:
        witnesses = witnesses_for_star(S, sigma, tangles)
    else:
        witnesses = [frozenset(P) for P in witnesses]
        if len(witnesses) != len(members):
            raise InputError("one witness tangle per star member, in order")
        for s, P in zip(members, witnesses):
            if orient.f_tangle_violation(S, P, family) is not None:
                raise InputError("witness is not a tangle of the family")
            bad = closely_related_violation(S, U.invert(s), P)
            if bad is not None:
                raise InputError(f"witness fails close relationship: {bad}")

    # extend by the up-closures of the member inverses, as singletons
    inverses = [U.invert(s) for s in members]
    extra = [
        frozenset((x,))
        for x in S.oriented
        if any(U.leq(i, x) for i in inverses)
    ]
    fbar = family.extended(extra, name="refine-extension")
    fbar.closed_under_shifting = True

    res = duality.duality_decide(S, fbar, caps, verify=False)
    if res.kind != "tree":
        raise IntegrityError(
            "a tangle survived the extension despite the star being "
            "inessential"
        )
    T = res.tree

    for _ in range(len(members) + 1):
        leafseps = frozenset(T.leaf_separations())
        pending = [s for s in members if s not in leafseps]
        if not pending:
            break
        target = pending[0]
        P = witnesses[members.index(target)]
        if T.n == 1:
            raise IntegrityError("degenerate tree while members are pending")
        home = _home_vertex(T, P)
        star = T.star_at(home)
        if len(star) != 1:
            raise IntegrityError("tangle sits at a non-singleton star")
        (w,) = star
        if not U.leq(U.invert(target), w):
            raise IntegrityError("sink singleton is not above the right inverse")
        wbar = U.invert(w)
        flags = S.classify(wbar)
        if flags.degenerate or flags.trivial:
            raise IntegrityError("shift base collapsed to a trivial separation")
        if duality.emulation_violation(S, target, wbar) is not None:
            raise IntegrityError("close relationship failed to buy emulation")
        keep = sorted(
            {s for s in members if s in leafseps} | {wbar}, key=U.sort_key
        )
        try:
            T = trees.irredundant_reduction(T, keep=keep, family=fbar)
            T = duality.shift_stree(T, wbar, target, fbar)
        except (InputError, DomainError) as e:
            raise IntegrityError(f"securing {U.format_element(target)}: {e}")
        if trace is not None:
            trace.append({"target": target, "base": wbar})
        now = frozenset(T.leaf_separations())
        if target not in now or not all(s in now for s in leafseps & set(members)):
            raise IntegrityError("shift lost a secured leaf")
    else:
        raise IntegrityError("leaf securing failed to converge")

    try:
        T = trees.irredundant_reduction(T, keep=members, family=fbar)
    except (InputError, DomainError) as e:
        raise IntegrityError(f"final reduction: {e}")

    fprime = family.extended(
        [frozenset((i,)) for i in inverses], name="refined"
    )
    rep = T.validate(fprime)
    if not rep.all_good():
        raise IntegrityError(f"refined tree fails validation: {rep}")
    leafseps = frozenset(T.leaf_separations())
    missing = [s for s in members if s not in leafseps]
    if missing:
        raise IntegrityError("a member ended up off the leaves")
    return T


# -- whole-tree refinement --


@dataclass
class RefineOutcome:
    refined: NestedSet
    base: NestedSet
    tangles: tuple
    essential: tuple
    inessential: tuple
    star_trees: tuple  # (star, STree) pairs, one per refined node
    node_kinds: tuple  # (node, "tangle-home" | "family-star")
    at_most_one_inessential: bool


def refine_treeset(S, nested: NestedSet, family, tangles=None, caps=DEFAULT_CAPS) -> RefineOutcome:
    """Grow a nested set distinguishing all tangles until every node is
    a family star or home to a tangle."""
    U = S.universe
    if tangles is None:
        tangles = orient.enumerate_tangles(S, family, caps)
    if not tangles:
        raise DomainError("the family has no tangles to arrange")
    pair = orient.undistinguished_pair(S, nested.members, tangles)
    if pair is not None:
        raise DomainError("nested set does not distinguish all tangles")

    split = trees.essential_nodes(S, nested, tangles, caps)
    star_trees = []
    members = set(nested.members)
    for sig in split.inessential:
        T = refine_star(S, sig, family, tangles=tangles, caps=caps)
        star_trees.append((sig, T))
        members.update(U.canon(lab) for lab in T.alpha.values())

    try:
        refined = NestedSet(S, members)
    except InputError as e:
        raise IntegrityError(f"refinement produced crossing separations: {e}")

    homes = {trees.lives_at(S, O, refined) for O in tangles}
    kinds = []
    for node in trees.nodes_of(refined, caps):
        if node in homes:
            kinds.append((node, "tangle-home"))
        elif node in family.stars:
            kinds.append((node, "family-star"))
        else:
            raise IntegrityError(
                "refined node is neither a family star nor home to a tangle"
            )
    return RefineOutcome(
        refined=refined,
        base=nested,
        tangles=tuple(tangles),
        essential=split.essential,
        inessential=split.inessential,
        star_trees=tuple(star_trees),
        node_kinds=tuple(kinds),
        at_most_one_inessential=len(split.inessential) <= 1,
    )

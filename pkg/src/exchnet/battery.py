"""Built-in golden example battery.

Each item recomputes a worked example from first principles and checks the
published value exactly or at the stated tolerance.  The CLI front end prints
one pass/fail line per item.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .counting import (
    edge_class,
    inj,
    star_class,
    triangle_class,
    two_disjoint_edges_class,
    r_count,
)
from .dependence import (
    BIDIRECTED,
    dependence_graph_from_edges,
    incidence_cliques,
    kneser_graph,
)
from .estimation import (
    ClassDistribution,
    ErgmSpec,
    STATUS_NON_UNIQUE,
    degree_collision_classes,
    dissociated_mle,
    ergm_fit,
    ergm_stats,
    exch_mle,
)
from .extendability import extendable_check
from .graphs import LabeledNetwork, UnlabeledClass, enumerate_classes
from .mobius import bidirected_joint, mask_of, mobius_from_class_distribution


@dataclass
class BatteryItem:
    name: str
    ok: bool
    detail: str = ""


def paw_network() -> LabeledNetwork:
    return LabeledNetwork.from_edges(4, [(1, 4), (2, 3), (2, 4), (3, 4)])


GOLDEN_MLE = {
    "1-2": Fraction(2, 3),
    "1-3,2-3": Fraction(5, 12),
    "1-4,2-3": Fraction(1, 3),
    "1-2,1-3,2-3": Fraction(1, 4),
    "1-4,2-4,3-4": Fraction(1, 4),
    "1-4,2-3,3-4": Fraction(1, 6),
    "1-4,2-3,2-4,3-4": Fraction(1, 12),
}

GOLDEN_DISSOCIATED = {
    "1-2": Fraction(1, 2),
    "1-3,2-3": Fraction(5, 16),
    "1-4,2-3": Fraction(1, 4),
    "1-2,1-3,2-3": Fraction(3, 16),
    "1-4,2-4,3-4": Fraction(3, 16),
    "1-4,2-3,3-4": Fraction(1, 8),
    "1-4,2-3,2-4,3-4": Fraction(1, 16),
}


def _item_exch_mle() -> BatteryItem:
    mv = exch_mle(paw_network())
    for u, v in mv.in_order():
        want = GOLDEN_MLE.get(u.key(), Fraction(1) if u.is_empty else Fraction(0))
        if v != want:
            return BatteryItem(
                "exchangeable-mle", False, f"z[{u.key()}] = {v}, want {want}"
            )
    return BatteryItem("exchangeable-mle", True)


def _item_stats() -> BatteryItem:
    paw = paw_network()
    fs = ergm_stats(ErgmSpec("frank_strauss", 4), paw)
    kn = ergm_stats(ErgmSpec("kneser", 4), paw)
    if fs != (4, 5, 1, 1):
        return BatteryItem("family-statistics", False, f"frank_strauss {fs}")
    if kn != (4, 1):
        return BatteryItem("family-statistics", False, f"kneser {kn}")
    return BatteryItem("family-statistics", True)


def _item_inj_values() -> BatteryItem:
    paw = paw_network()
    s3 = star_class(3).representative()
    a = inj(s3, paw)
    b = inj(s3, LabeledNetwork.complete(4))
    if (a, b) != (6, 24):
        return BatteryItem("injective-counts", False, f"got {(a, b)}")
    return BatteryItem("injective-counts", True)


def _item_supergraph_coefficients() -> BatteryItem:
    paw = paw_network()
    got = {
        u.key(): r_count(u, paw)
        for u in enumerate_classes(4, True)
        if r_count(u, paw)
    }
    want = {
        "1-4,2-3,2-4,3-4": 1,
        "1-3,1-4,2-3,2-4,3-4": 2,
        "1-2,1-3,1-4,2-3,2-4,3-4": 1,
    }
    ok = got == want
    return BatteryItem(
        "supergraph-coefficients", ok, "" if ok else f"got {got}"
    )


def _item_dissociated_mle() -> BatteryItem:
    rep = dissociated_mle(paw_network())
    for u, v in rep.z.in_order():
        want = GOLDEN_DISSOCIATED.get(
            u.key(), Fraction(1) if u.is_empty else Fraction(0)
        )
        if abs(v - float(want)) > 1e-4:
            return BatteryItem(
                "dissociated-mle", False, f"z[{u.key()}] = {v}, want {want}"
            )
    if abs(rep.likelihood - 1 / 16) > 1e-6:
        return BatteryItem(
            "dissociated-mle", False, f"likelihood {rep.likelihood}"
        )
    if rep.constraint_residual > 1e-8:
        return BatteryItem(
            "dissociated-mle", False, f"residual {rep.constraint_residual}"
        )
    return BatteryItem("dissociated-mle", True)


def _item_dissociated_flat_family() -> BatteryItem:
    rep = dissociated_mle(LabeledNetwork.path(4))
    if rep.status != STATUS_NON_UNIQUE:
        return BatteryItem(
            "dissociated-flat-family", False, f"status {rep.status}"
        )
    if abs(rep.likelihood - 1 / 16) > 1e-6:
        return BatteryItem(
            "dissociated-flat-family", False, f"likelihood {rep.likelihood}"
        )
    return BatteryItem("dissociated-flat-family", True)


def _item_mixture_moments() -> BatteryItem:
    paw_cls = UnlabeledClass.of(paw_network())
    cd = ClassDistribution(
        4, {paw_cls: Fraction(3, 4), UnlabeledClass.empty(): Fraction(1, 4)}
    )
    mv = mobius_from_class_distribution(cd)
    for u, v in mv.in_order():
        want = GOLDEN_DISSOCIATED.get(
            u.key(), Fraction(1) if u.is_empty else Fraction(0)
        )
        if v != want:
            return BatteryItem(
                "mixture-moments", False, f"z[{u.key()}] = {v}, want {want}"
            )
    return BatteryItem("mixture-moments", True)


def _item_bidirected_chain() -> BatteryItem:
    # three variables in a bidirected chain, realized on the dyads of n=3
    dep = dependence_graph_from_edges(
        3, BIDIRECTED, [("1-2", "1-3"), ("1-3", "2-3")]
    )
    z1, z2, z3 = Fraction(1, 2), Fraction(2, 5), Fraction(3, 7)
    z12, z23 = Fraction(1, 6), Fraction(1, 8)
    z123 = Fraction(1, 11)
    z = {
        mask_of([0]): z1,
        mask_of([1]): z2,
        mask_of([2]): z3,
        mask_of([0, 1]): z12,
        mask_of([1, 2]): z23,
        mask_of([0, 2]): z1 * z3,
        mask_of([0, 1, 2]): z123,
    }
    marg13 = bidirected_joint(dep, z, mask_of([0, 2])) + bidirected_joint(
        dep, z, mask_of([0, 1, 2])
    )
    if marg13 != z1 * z3:
        return BatteryItem(
            "bidirected-chain", False, f"P(X1=1,X3=1) = {marg13}"
        )
    lone = bidirected_joint(dep, z, mask_of([0]))
    if lone != z1 - z12 - z1 * z3 + z123:
        return BatteryItem(
            "bidirected-chain", False, f"P(X1=1,X2=0,X3=0) = {lone}"
        )
    return BatteryItem("bidirected-chain", True)


def _item_bidirected_complement() -> BatteryItem:
    from .graphs import dyad_index

    dep = kneser_graph(4, BIDIRECTED)
    paw_mask = mask_of(
        [dyad_index(1, 4), dyad_index(2, 3), dyad_index(2, 4), dyad_index(3, 4)]
    )
    pairs = [frozenset(p) for p in ([0, 5], [1, 4], [2, 3])]
    for ze_num in range(1, 5):
        for zu_num in range(1, 5):
            ze = Fraction(ze_num, 6)
            zu = Fraction(zu_num, 18)
            z = {}
            for k in range(6):
                z[mask_of([k])] = ze
            for pr in pairs:
                z[mask_of(pr)] = zu
            got = bidirected_joint(dep, z, paw_mask)
            want = ze**2 * zu - 2 * ze * zu**2 + zu**3
            if got != want:
                return BatteryItem(
                    "bidirected-complement",
                    False,
                    f"ze={ze} zu={zu}: got {got}, want {want}",
                )
    return BatteryItem("bidirected-complement", True)


def _item_collisions() -> BatteryItem:
    if degree_collision_classes(4):
        return BatteryItem("degree-collisions", False, "groups at n=4")
    groups = degree_collision_classes(5)
    if len(groups) != 3 or any(len(g) != 2 for g in groups):
        return BatteryItem(
            "degree-collisions", False, f"{len(groups)} groups at n=5"
        )
    seen = set()
    for g in groups:
        degs = tuple(
            sorted(g[0].padded(5).degrees(), reverse=True)
        )
        seen.add(degs)
    want = {(2, 2, 2, 1, 1), (3, 2, 2, 2, 1), (3, 3, 2, 2, 2)}
    ok = seen == want
    return BatteryItem("degree-collisions", ok, "" if ok else f"got {seen}")


def _item_petersen() -> BatteryItem:
    dep = kneser_graph(5)
    if dep.m != 10 or dep.edge_count() != 15:
        return BatteryItem(
            "petersen-structure", False, f"{dep.m} vertices, {dep.edge_count()} edges"
        )
    if any(dep.degree(k) != 3 for k in range(dep.m)):
        return BatteryItem("petersen-structure", False, "not 3-regular")
    bad = [c for c in incidence_cliques(5) if c.shape == "other"]
    if bad:
        return BatteryItem(
            "petersen-structure", False, f"{len(bad)} unclassified cliques"
        )
    return BatteryItem("petersen-structure", True)


def _item_not_extendable() -> BatteryItem:
    rep = extendable_check(exch_mle(paw_network()), 5)
    ok = not rep.feasible
    return BatteryItem(
        "mle-not-extendable", ok, "" if ok else "reported feasible at m=5"
    )


def _item_edge_logit() -> BatteryItem:
    x = paw_network()  # 4 edges out of 6
    fit = ergm_fit(ErgmSpec("edges", 4), x)
    if fit.status != "optimal":
        return BatteryItem("edge-parameter-logit", False, f"status {fit.status}")
    want = math.log((4 / 6) / (1 - 4 / 6))
    got = fit.nu["star1"]
    ok = abs(got - want) < 1e-8
    return BatteryItem(
        "edge-parameter-logit", ok, "" if ok else f"got {got}, want {want}"
    )


BATTERY = [
    _item_exch_mle,
    _item_stats,
    _item_inj_values,
    _item_supergraph_coefficients,
    _item_mixture_moments,
    _item_dissociated_mle,
    _item_dissociated_flat_family,
    _item_bidirected_chain,
    _item_bidirected_complement,
    _item_collisions,
    _item_petersen,
    _item_not_extendable,
    _item_edge_logit,
]


def run_battery() -> list:
    return [fn() for fn in BATTERY]

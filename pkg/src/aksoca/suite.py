"""Dispatch named groups of checks over a loaded instance."""
from __future__ import annotations

from dataclasses import dataclass

from .aks import (AbstractKrivineStructure, check_adjunctor_recovery, check_combinator_inequalities,
                  check_derived_laws, check_inclusion_chain, check_lemma_equivalence, validate_aks)
from .constructions import (aks_to_foca_bullet, aks_to_ioca_perp, check_construction_soundness,
                            check_inclusion_equivalence, check_iso_Hk_HA, check_realizers_across_variants,
                            check_sharp_equals_bar_circ, check_triangle_commutes, check_triangle_for_algebra,
                            foca_to_aks, galois_pair)
from .indexed import (check_indexed_equivalence, check_oca_entailment,
                      check_indexed_inclusion_equivalence, check_indexed_iso)
from .oca import FiniteOca, OcaClass, check_heyting_laws, check_sharp_laws, classify_oca
from .polarity import RealizabilityLattice, check_polarity_laws
from .polynomials import check_beta_exhaustive
from .reports import CheckReport
from .stackops import VARIANTS, check_adjunction, check_stackops_laws

SUITES = ("polarity", "stackops", "aks", "oca", "constructions", "indexed", "all")
BETA_MAX_ELEMENTS = 16


@dataclass(frozen=True)
class SuiteOptions:
    seed: int = 0
    cap: int = 14
    samples: int | None = None
    max_index: int = 3


def _rl(instance) -> RealizabilityLattice | None:
    if isinstance(instance, AbstractKrivineStructure):
        return instance.rl
    if isinstance(instance, RealizabilityLattice):
        return instance
    return None


def _renamed(rep: CheckReport, prefix: str) -> CheckReport:
    rep.name = f"{prefix}{rep.name}"
    return rep


def _oca_reports(a: FiniteOca, opt: SuiteOptions, prefix: str = "") -> list[CheckReport]:
    """Axioms of the algebra; the full adjunction only decides the reported class."""
    cls, laws = classify_oca(a)
    out = []
    for rep in laws:
        if rep.name == "oca.full_adjunction":
            continue
        out.append(_renamed(rep, prefix))
    summary = CheckReport(f"{prefix}oca.class", checked=1)
    summary.notes["class"] = None if cls is None else cls.name
    if cls is None:
        summary.record({"class": None})
    out.append(summary)
    out.append(_renamed(check_sharp_laws(a, cls), prefix))
    if cls is not None:
        out.append(_renamed(check_heyting_laws(a), prefix))
    if cls is OcaClass.FOCA and a.n <= BETA_MAX_ELEMENTS:
        out.append(_renamed(check_beta_exhaustive(a), prefix))
    return out


def _polarity(instance, opt):
    rl = _rl(instance)
    return [] if rl is None else check_polarity_laws(rl, samples=opt.samples, seed=opt.seed)


def _stackops(instance, opt):
    rl = _rl(instance)
    if rl is None:
        return []
    out = [check_adjunction(rl, v, samples=opt.samples, seed=opt.seed, cap=opt.cap) for v in VARIANTS]
    return out + check_stackops_laws(rl, samples=opt.samples, seed=opt.seed, cap=opt.cap)


def _aks(instance, opt):
    if not isinstance(instance, AbstractKrivineStructure):
        return []
    k, kw = instance, dict(samples=opt.samples, seed=opt.seed)
    return [validate_aks(k), check_derived_laws(k), *check_inclusion_chain(k, **kw),
            check_adjunctor_recovery(k, cap=opt.cap, **kw), check_combinator_inequalities(k, **kw),
            check_lemma_equivalence(k, **kw)]


def _oca(instance, opt):
    if isinstance(instance, FiniteOca):
        return _oca_reports(instance, opt)
    if isinstance(instance, AbstractKrivineStructure):
        return (_oca_reports(aks_to_foca_bullet(instance, opt.cap), opt, "bullet.")
                + _oca_reports(aks_to_ioca_perp(instance, opt.cap), opt, "perp."))
    return []


def _constructions(instance, opt):
    if isinstance(instance, AbstractKrivineStructure):
        k = instance
        return [*check_construction_soundness(k, opt.cap), check_sharp_equals_bar_circ(k, opt.cap),
                check_iso_Hk_HA(k, opt.cap), check_inclusion_equivalence(k, opt.cap, seed=opt.seed),
                check_realizers_across_variants(k, opt.cap), check_triangle_commutes(k, opt.cap, seed=opt.seed)]
    if isinstance(instance, FiniteOca) and classify_oca(instance)[0] is OcaClass.FOCA:
        back = validate_aks(foca_to_aks(instance))
        back.name = "constructions.foca_to_aks"
        return [back, galois_pair(instance, seed=opt.seed)[1], check_triangle_for_algebra(instance, seed=opt.seed)]
    return []


def _indexed(instance, opt):
    m = opt.max_index
    if isinstance(instance, AbstractKrivineStructure):
        k = instance
        a = aks_to_foca_bullet(k, opt.cap)
        return [check_indexed_iso(k, m, opt.cap, opt.seed), check_indexed_inclusion_equivalence(k, m, opt.cap, opt.seed),
                check_oca_entailment(a, m, opt.seed),
                check_indexed_equivalence(a, m, opt.seed)]
    if isinstance(instance, FiniteOca):
        a = instance
        cls = classify_oca(a)[0]
        if cls is None:
            return []
        out = [check_oca_entailment(a, m, opt.seed)]
        if cls is OcaClass.FOCA:
            out.append(check_indexed_equivalence(a, m, opt.seed))
        return out
    return []


_DISPATCH = {"polarity": _polarity, "stackops": _stackops, "aks": _aks, "oca": _oca,
             "constructions": _constructions, "indexed": _indexed}


def run_suite(instance, suite: str = "all", options: SuiteOptions | None = None) -> list[CheckReport]:
    """Reports of every check in ``suite`` that applies to the instance, sorted by name.

    Lattices without application get the polarity and push checks only.
    """
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    opt = options or SuiteOptions()
    names = [s for s in SUITES[:-1]] if suite == "all" else [suite]
    reports = [r for s in names for r in _DISPATCH[s](instance, opt)]
    return sorted(reports, key=lambda r: r.name)

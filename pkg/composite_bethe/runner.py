"""Suite registry and worker pool.

Every suite expands into independent tasks.  Parameters are drawn up front
on the calling thread, so a report depends only on (config, seed) and never
on worker scheduling.
"""

from __future__ import annotations
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import permutations
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union
import concurrent.futures
import time

import numpy as np

from .actions import ACTION_FORMULAS, a12_base_check, a13_commute_check, verify_action
from .bethe import (
    BetheIndex,
    bethe_cache,
    bethe_polynomial,
    bethe_vector,
    bethe_vector_recursive,
    involution_check,
    phi_formula_check,
    psi_formula_check,
)
from .composite import (
    SplitSpec,
    TermLedger,
    act12_composite_verify,
    act13_composite_verify,
    coassociativity_verify,
    coproduct_entry_check,
    corollary1_verify,
    gl2_base_verify,
    ledger_T12,
    ledger_T13,
    theorem1_verify,
    weight_function_check,
)
from .config import SCHEMA_VERSION, TOOL_VERSION, Config, JobConfig
from .errors import ConfigError, GenericityError, RetryExhausted, SkippedCheck
from .logger import log
from .ratfun import ParamSet, genericity_check, require_generic
from .rep import ChainSpec, MonodromyRep, TwistFactor, build_chain, residual_check, rtt_selftest, vacuum_selftest
from .types import CheckRecord, CheckResult, Suite, Verdict
from .utils import clip, fmt, fmt_all, instance_key

Outcome = Union[CheckResult, TermLedger]


@dataclass
class Task:
    suite: Suite
    instance: Dict[str, Any]
    fn: Callable[[], Outcome]
    # negative controls pass when the underlying check fails
    control: bool = False


# ---------------------------------------------------------------------------
# seeded draws


def _rng(seed: int, stream: Sequence[int]) -> np.random.Generator:
    return np.random.default_rng([seed, *stream])


def draw_generic_rationals(
    seed: int,
    count: int,
    bound: int,
    fixed: Sequence[ParamSet] = (),
    c: Fraction = Fraction(1),
    negate: bool = False,
    max_redraws: int = 50,
    stream: Sequence[int] = (),
) -> ParamSet:
    """Rationals n/d with |n| <= bound and 1 <= d <= bound, jointly generic with ``fixed``.

    With ``negate`` the negated draws must be generic with ``fixed`` as well.
    """
    if bound < count:
        raise ConfigError(f"draw bound {bound} is smaller than the number of draws {count}")
    if count == 0:
        return ParamSet((), "t")
    rng = _rng(seed, stream)
    for _ in range(max_redraws):
        nums = rng.integers(-bound, bound + 1, size=count)
        dens = rng.integers(1, bound + 1, size=count)
        vals = tuple(Fraction(int(n), int(d)) for n, d in zip(nums, dens))
        if len(set(vals)) != count:
            continue
        if not genericity_check([vals, *fixed], c).ok:
            continue
        if negate and not genericity_check([tuple(-x for x in vals), *fixed], c).ok:
            continue
        return ParamSet(vals, "t")
    raise RetryExhausted(f"no generic draw of {count} rationals after {max_redraws} attempts")


def draw_twist(seed: int, bound: int, stream: Sequence[int] = ()) -> Tuple[Fraction, Fraction, Fraction]:
    """Three distinct nonzero rationals, so r_1 and r_3 are nontrivial."""
    rng = _rng(seed, stream)
    while True:
        nums = rng.integers(1, bound + 1, size=3) * rng.choice([-1, 1], size=3)
        dens = rng.integers(1, bound + 1, size=3)
        d = tuple(Fraction(int(n), int(m)) for n, m in zip(nums, dens))
        if len(set(d)) == 3:
            return d


def configure_caches(cfg: Config) -> None:
    cache = bethe_cache()
    cache.enabled = cfg.enable_cache
    cache.max_size = cfg.cache_size


# ---------------------------------------------------------------------------
# runner


_SUITE_ID = {s: k for k, s in enumerate(Suite)}


class VerificationRunner:
    def __init__(self, job: JobConfig, config: Optional[Config] = None):
        self.job = job
        self.cfg = config or Config()
        configure_caches(self.cfg)
        self.chain = self._build_chain()
        self.rep = build_chain(self.chain)

    # -- setup ----------------------------------------------------------------

    def _build_chain(self) -> ChainSpec:
        job = self.job
        if job.xi is not None:
            require_generic([tuple(job.xi)], job.c)
            xi = ParamSet.of(job.xi, "xi")
        else:
            xi = draw_generic_rationals(job.seed, job.L, max(self.cfg.draw_bound, job.L), c=job.c,
                                        max_redraws=self.cfg.max_redraws, stream=(0,))
        twist = tuple(job.twist) if job.twist is not None else draw_twist(job.seed, self.cfg.draw_bound, stream=(1,))
        return ChainSpec(job.L, ParamSet(xi.elems, "xi"), twist, job.c)

    def split(self, L1: int) -> SplitSpec:
        twist1 = draw_twist(self.job.seed, self.cfg.draw_bound, stream=(2, L1))
        return SplitSpec.with_twist1(self.chain, L1, twist1)

    def points(self, suite: Suite, count: int, *key: int, negate: bool = False) -> List[Fraction]:
        vals = draw_generic_rationals(
            self.job.seed, count, max(self.cfg.draw_bound, count), fixed=[self.chain.xi], c=self.chain.c,
            negate=negate, max_redraws=self.cfg.max_redraws, stream=(3, _SUITE_ID[suite], *key),
        )
        return list(vals.elems)

    def index(self, suite: Suite, a: int, b: int, extra: int, *key: int, negate: bool = False):
        pts = self.points(suite, a + b + extra, a, b, *key, negate=negate)
        idx = BetheIndex.of(pts[:a], pts[a:a + b])
        return idx, pts[a + b:]

    def _grid(self, a_cap: Optional[int] = None, b_cap: Optional[int] = None) -> Iterable[Tuple[int, int]]:
        a_max = self.job.a_max if a_cap is None else min(a_cap, self.job.a_max)
        b_max = self.job.b_max if b_cap is None else min(b_cap, self.job.b_max)
        for a in range(a_max + 1):
            for b in range(b_max + 1):
                yield a, b

    def _samples(self) -> range:
        return range(self.job.samples)

    @staticmethod
    def _inst(idx: BetheIndex, **extra) -> Dict[str, Any]:
        out = idx.describe()
        for k, v in extra.items():
            out[k] = fmt(v) if isinstance(v, Fraction) else v
        return out

    # -- suites ---------------------------------------------------------------

    def tasks_rtt(self) -> List[Task]:
        out = []
        for length in range(min(self.chain.L, 3) + 1):
            sub = ChainSpec(length, ParamSet(self.chain.xi.elems[:length], "xi"), self.chain.twist, self.chain.c)
            rep = build_chain(sub)
            # at least three point pairs per length
            for s in range(max(self.job.samples, 3)):
                w1, w2 = self.points(Suite.RTT, 2, length, s)
                out.append(Task(Suite.RTT, {"L": length, "sample": s, "w": fmt_all((w1, w2))},
                                lambda rep=rep, w1=w1, w2=w2: rtt_selftest(rep, w1, w2)))
                out.append(Task(Suite.RTT, {"L": length, "sample": s, "check": "vacuum", "w": fmt(w1)},
                                lambda rep=rep, w1=w1: vacuum_selftest(rep, w1)))
        sheared = MonodromyRep(self.rep.sites + (TwistFactor(self.chain.twist, Fraction(1)),),
                               self.chain.L, self.chain.c, "T-shear")
        w1, w2 = self.points(Suite.RTT, 2, 99)
        out.append(Task(Suite.RTT, {"L": self.chain.L, "control": "u-dependent twist", "w": fmt_all((w1, w2))},
                        lambda: rtt_selftest(sheared, w1, w2), control=True))
        return out

    def tasks_actions(self) -> List[Task]:
        out = []
        for (i, j), form in ACTION_FORMULAS.items():
            for a, b in self._grid():
                if (i, j) == (3, 2) and b == 0:
                    continue
                for s in self._samples():
                    idx, (z,) = self.index(Suite.ACTIONS, a, b, 1, 10 * i + j, s)
                    out.append(Task(Suite.ACTIONS, self._inst(idx, formula=f"T{i}{j}", z=z, sample=s),
                                    lambda form=form, idx=idx, z=z: verify_action(form, self.rep, idx, z)))
        for a, b in self._grid():
            idx, (z1, z2) = self.index(Suite.ACTIONS, a, b, 2, 1)
            out.append(Task(Suite.ACTIONS, self._inst(idx, check="T13 twice", z1=z1, z2=z2),
                            lambda idx=idx, z1=z1, z2=z2: a13_commute_check(self.rep, idx, z1, z2)))
        for b in range(self.job.b_max + 1):
            idx, (z,) = self.index(Suite.ACTIONS, 0, b, 1, 2)
            out.append(Task(Suite.ACTIONS, self._inst(idx, check="T12 base step", z=z),
                            lambda idx=idx, z=z: a12_base_check(self.rep, idx.v_set, z)))
        if self.job.a_max >= 1 and self.job.b_max >= 1:
            idx, (z,) = self.index(Suite.ACTIONS, 1, 1, 1, 3)
            out.append(Task(Suite.ACTIONS, self._inst(idx, formula="T32", control="drop piece 2", z=z),
                            lambda: verify_action(ACTION_FORMULAS[(3, 2)], self.rep, idx, z, omit=2), control=True))
        return out

    def tasks_bethe_equiv(self) -> List[Task]:
        out = []
        for a, b in self._grid():
            for s in self._samples():
                idx, _ = self.index(Suite.BETHE_EQUIV, a, b, 0, s)
                out.append(Task(Suite.BETHE_EQUIV, self._inst(idx, sample=s), lambda idx=idx: residual_check(
                    "formula/recursion", bethe_vector(self.rep, idx), bethe_vector_recursive(self.rep, idx))))
        return out

    def tasks_bethe_sym(self) -> List[Task]:
        out = []
        for a, b in self._grid(3, 3):
            idx, _ = self.index(Suite.BETHE_SYM, a, b, 0)
            out.append(Task(Suite.BETHE_SYM, self._inst(idx), lambda idx=idx: self._symmetry(idx)))
        return out

    def _symmetry(self, idx: BetheIndex) -> CheckResult:
        ref = bethe_vector(self.rep, idx, use_cache=False)
        us, vs = idx.u_set.elems, idx.v_set.elems
        for pu in list(permutations(us))[1:]:
            res = residual_check("symmetry", ref, bethe_vector(self.rep, BetheIndex.of(pu, vs), use_cache=False))
            if not res.ok:
                res.detail = f"u order {fmt_all(pu)}"
                return res
        for pv in list(permutations(vs))[1:]:
            res = residual_check("symmetry", ref, bethe_vector(self.rep, BetheIndex.of(us, pv), use_cache=False))
            if not res.ok:
                res.detail = f"v order {fmt_all(pv)}"
                return res
        return CheckResult("symmetry", Verdict.OK)

    def _split_tasks(self, suite: Suite, fn: Callable[[SplitSpec, BetheIndex], Outcome],
                     a_cap: Optional[int] = None, b_cap: Optional[int] = None) -> List[Task]:
        out = []
        for L1 in self.job.splits:
            split = self.split(L1)
            for a, b in self._grid(a_cap, b_cap):
                for s in self._samples():
                    idx, _ = self.index(suite, a, b, 0, L1, s)
                    out.append(Task(suite, self._inst(idx, L1=L1, sample=s), lambda split=split, idx=idx: fn(split, idx)))
        return out

    def tasks_theorem1(self) -> List[Task]:
        out = []
        for L1 in self.job.splits:
            split, (u,) = self.split(L1), self.points(Suite.THEOREM1, 1, 0, L1)
            out.append(Task(Suite.THEOREM1, {"L1": L1, "check": "coproduct", "u": fmt(u)},
                            lambda split=split, u=u: coproduct_entry_check(split, u)))
        return out + self._split_tasks(Suite.THEOREM1, theorem1_verify, 3, 3)

    def tasks_corollary1(self) -> List[Task]:
        return self._split_tasks(Suite.COROLLARY1, corollary1_verify, 3, 3)

    def tasks_gl2(self) -> List[Task]:
        out = []
        for L1 in self.job.splits:
            split = self.split(L1)
            for b in range(self.job.b_max + 1):
                idx, _ = self.index(Suite.GL2, 0, b, 0, L1, negate=True)
                out.append(Task(Suite.GL2, self._inst(idx, L1=L1), lambda split=split, idx=idx: gl2_base_verify(split, idx.v_set)))
        return out

    def tasks_composite_actions(self) -> List[Task]:
        out = []
        for L1 in self.job.splits:
            split = self.split(L1)
            for a, b in self._grid():
                if a >= 1 and b >= 1:
                    idx, (z,) = self.index(Suite.COMPOSITE_ACTIONS, a - 1, b - 1, 1, 13, L1)
                    out.append(Task(Suite.COMPOSITE_ACTIONS, self._inst(idx, L1=L1, action="T13", z=z),
                                    lambda split=split, idx=idx, z=z: act13_composite_verify(split, idx, z)))
                if a >= 1:
                    idx, (z,) = self.index(Suite.COMPOSITE_ACTIONS, a - 1, b, 1, 12, L1)
                    out.append(Task(Suite.COMPOSITE_ACTIONS, self._inst(idx, L1=L1, action="T12", z=z),
                                    lambda split=split, idx=idx, z=z: act12_composite_verify(split, idx, z)))
        return out

    def tasks_ledgers(self) -> List[Task]:
        out = []
        a_max, b_max = self.job.a_max, self.job.b_max
        for L1 in self.job.splits:
            split = self.split(L1)
            # controls need both sub-chains to carry the perturbed term
            inner = 0 < L1 < self.chain.L
            if a_max >= 1 and b_max >= 1:
                idx, (z,) = self.index(Suite.LEDGERS, a_max - 1, b_max - 1, 1, 13, L1)
                out.append(Task(Suite.LEDGERS, self._inst(idx, L1=L1, ledger="T13", z=z),
                                lambda split=split, idx=idx, z=z: ledger_T13(split, idx, z)))
                if inner and a_max >= 2:
                    out.append(Task(Suite.LEDGERS, self._inst(idx, L1=L1, ledger="T13", control="flip C22", z=z),
                                    lambda split=split, idx=idx, z=z: ledger_T13(split, idx, z, perturb={"C22": -1}),
                                    control=True))
            if a_max >= 1:
                # B_{a-1,b} vanishes on fundamental sites unless b <= a-1
                idx, (z,) = self.index(Suite.LEDGERS, a_max - 1, min(b_max, a_max - 1), 1, 12, L1)
                out.append(Task(Suite.LEDGERS, self._inst(idx, L1=L1, ledger="T12", z=z),
                                lambda split=split, idx=idx, z=z: ledger_T12(split, idx, z)))
                if inner and a_max >= 2:
                    out.append(Task(Suite.LEDGERS, self._inst(idx, L1=L1, ledger="T12", control="flip gamma_{2,3}", z=z),
                                    lambda split=split, idx=idx, z=z: ledger_T12(split, idx, z, perturb={"gamma_{2,3}": -1}),
                                    control=True))
        return out

    def tasks_weight(self) -> List[Task]:
        return self._split_tasks(Suite.WEIGHT, weight_function_check, 2, 2)

    def tasks_morphisms(self) -> List[Task]:
        out = []
        for a, b in self._grid(2, 2):
            idx, _ = self.index(Suite.MORPHISMS, a, b, 0, negate=True)
            out.append(Task(Suite.MORPHISMS, self._inst(idx, morphism="psi"), lambda idx=idx: psi_formula_check(self.rep, idx)))
            out.append(Task(Suite.MORPHISMS, self._inst(idx, morphism="phi"), lambda idx=idx: phi_formula_check(self.rep, idx)))
            out.append(Task(Suite.MORPHISMS, self._inst(idx, morphism="involution"),
                            lambda idx=idx: involution_check(bethe_polynomial(self.rep, idx))))
        return out

    def tasks_coassoc(self) -> List[Task]:
        out = []
        L = self.chain.L
        a, b = min(self.job.a_max, 2), min(self.job.b_max, 1)
        for l1 in range(L + 1):
            for l2 in range(l1, L + 1):
                t1 = draw_twist(self.job.seed, self.cfg.draw_bound, stream=(4, l1, l2, 1))
                t2 = draw_twist(self.job.seed, self.cfg.draw_bound, stream=(4, l1, l2, 2))
                t3 = tuple(p / (x * y) for p, x, y in zip(self.chain.twist, t1, t2))
                idx, _ = self.index(Suite.COASSOC, a, b, 0, l1, l2)
                out.append(Task(Suite.COASSOC, self._inst(idx, cuts=[l1, l2]),
                                lambda l1=l1, l2=l2, ts=(t1, t2, t3), idx=idx: coassociativity_verify(self.chain, (l1, l2), ts, idx)))
        return out

    SUITES: Dict[Suite, str] = {
        Suite.RTT: "tasks_rtt",
        Suite.ACTIONS: "tasks_actions",
        Suite.BETHE_EQUIV: "tasks_bethe_equiv",
        Suite.BETHE_SYM: "tasks_bethe_sym",
        Suite.THEOREM1: "tasks_theorem1",
        Suite.COROLLARY1: "tasks_corollary1",
        Suite.GL2: "tasks_gl2",
        Suite.COMPOSITE_ACTIONS: "tasks_composite_actions",
        Suite.LEDGERS: "tasks_ledgers",
        Suite.WEIGHT: "tasks_weight",
        Suite.MORPHISMS: "tasks_morphisms",
        Suite.COASSOC: "tasks_coassoc",
    }

    def tasks(self) -> List[Task]:
        out: List[Task] = []
        for suite in self.job.suites:
            built = getattr(self, self.SUITES[suite])()
            log.info("suite %s: %d checks", suite.value, len(built))
            out.extend(built)
        return out

    # -- execution --------------------------------------------------------------

    def _execute(self, task: Task) -> CheckRecord:
        t0 = time.time()
        try:
            outcome = task.fn()
        except SkippedCheck as e:
            return CheckRecord(task.suite, task.instance, Verdict.SKIPPED, detail=e.reason, wall_time=time.time() - t0)
        groups: List[Dict[str, Any]] = []
        if isinstance(outcome, TermLedger):
            groups = outcome.group_records()
            outcome = outcome.as_result()
        verdict, detail = outcome.verdict, outcome.detail
        witness = asdict(outcome.witness) if outcome.witness is not None else None
        if task.control:
            verdict = Verdict.OK if outcome.verdict == Verdict.FAIL else Verdict.FAIL
            detail = "control detected" if verdict == Verdict.OK else "control passed unexpectedly"
        if verdict == Verdict.FAIL:
            log.warning("check failed: %s %s", task.suite.value, task.instance)
        return CheckRecord(task.suite, task.instance, verdict, witness, detail, time.time() - t0, groups)

    def run(self, tasks: Optional[List[Task]] = None) -> List[CheckRecord]:
        tasks = self.tasks() if tasks is None else tasks
        records: List[CheckRecord] = []
        genericity: List[GenericityError] = []
        with concurrent.futures.ThreadPoolExecutor(max_workers=self.job.jobs) as ex:
            futs = {ex.submit(self._execute, t): t for t in tasks}
            for f in concurrent.futures.as_completed(futs):
                task = futs[f]
                try:
                    records.append(f.result())
                except GenericityError as e:
                    genericity.append(e)
                except Exception as e:
                    log.error("Error in check %s: %s", task.suite.value, e)
                    records.append(CheckRecord(task.suite, task.instance, Verdict.FAIL,
                                               {"error": type(e).__name__, "message": clip(str(e))}, "exception"))
        if genericity:
            raise genericity[0]
        records.sort(key=lambda r: (_SUITE_ID[r.suite], instance_key(r.instance)))
        log.debug("bethe cache: %s", bethe_cache().stats())
        return records

    def report(self, records: List[CheckRecord], timings: bool = False) -> Dict[str, Any]:
        cfg = self.job.as_dict()
        cfg["chain"] = {"xi": fmt_all(self.chain.xi), "twist": fmt_all(self.chain.twist)}
        return {
            "schema_version": SCHEMA_VERSION,
            "tool_version": TOOL_VERSION,
            "config": cfg,
            "records": [record_dict(r, timings) for r in records],
            "summary": summarize(records),
        }


def record_dict(r: CheckRecord, timings: bool = False) -> Dict[str, Any]:
    out: Dict[str, Any] = {"suite": r.suite.value, "instance": r.instance, "verdict": r.verdict.value}
    if r.witness is not None:
        out["witness"] = r.witness
    if r.detail:
        out["detail"] = r.detail
    if r.groups:
        out["groups"] = r.groups
    if timings and r.wall_time is not None:
        out["wall_time"] = round(r.wall_time, 6)
    return out


def summarize(records: List[CheckRecord]) -> Dict[str, Any]:
    counts = {v.value: 0 for v in Verdict}
    by_suite: Dict[str, Dict[str, int]] = {}
    for r in records:
        counts[r.verdict.value] += 1
        per = by_suite.setdefault(r.suite.value, {v.value: 0 for v in Verdict})
        per[r.verdict.value] += 1
    return {"total": len(records), **counts, "by_suite": by_suite}

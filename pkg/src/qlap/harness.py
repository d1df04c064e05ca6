"""Corpus generation, exhaustive verification and report emission.

Graphs are pushed through in chunks of equal order.  For n <= 8 the exact
spectral counts of a whole chunk come from the batch engine; larger graphs
(only reachable through graph6 input) fall back to the per-graph Sturm path.
Chunks are independent, so they can be farmed out to worker processes; the
merged report is sorted, which makes it independent of the job count.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import multiprocessing
import random
import sys
import time
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from typing import Iterable, Iterator, TextIO

import numpy as np

from . import exact_linalg as xl
from . import theorems as th
from .batch import BATCH_MAX_N, SpectralBatch
from .graph_core import (
    Graph, Graph6Error, bipartite_profile, canonical_key, complement, degree_stats,
    parse_graph6, write_graph6,
)
from .spectra import NumericEqualityUndecidable, q_spectrum, weyl_check

log = logging.getLogger(__name__)

SUITES = ("th1", "th2", "th3", "th4", "weyl", "das", "k1t")
LABELED_MAX_N = 8
COUNTER_KEYS = ("checked", "holds", "exceptions", "violations")


class ConfigError(ValueError):
    pass


class RunError(RuntimeError):
    pass


class Graph6StreamError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass
class SearchConfig:
    n_min: int = 2
    n_max: int = 6
    source: str = "labeled"        # "labeled", "random", or a graph6 path ("-" for stdin)
    dedupe: bool = False
    suites: tuple[str, ...] = ("th1",)
    jobs: int = 1
    output: str | None = None
    fmt: str = "json"
    random_count: int = 1000
    seed: int = 0
    chunk_size: int = 4096

    def __post_init__(self):
        self.suites = tuple(self.suites)
        if not self.suites:
            raise ConfigError("at least one suite is required")
        bad = [s for s in self.suites if s not in SUITES]
        if bad:
            raise ConfigError(f"unknown suites {bad}; choose from {SUITES}")
        if self.n_min < 1 or self.n_min > self.n_max:
            raise ConfigError(f"bad vertex range {self.n_min}..{self.n_max}")
        if self.source in ("labeled", "random") and self.n_max > LABELED_MAX_N:
            raise ConfigError(f"generated corpora stop at n = {LABELED_MAX_N}")
        if self.jobs < 1:
            raise ConfigError("jobs must be positive")

    def echo(self) -> dict:
        """Config fields that determine the result (not jobs, paths or format)."""
        out = {"n_min": self.n_min, "n_max": self.n_max, "source": self.source,
               "dedupe": self.dedupe, "suites": list(self.suites)}
        if self.source == "random":
            out.update(random_count=self.random_count, seed=self.seed)
        return out


@dataclass
class CounterexampleRecord:
    graph6: str
    suite: str
    detail: dict


@dataclass
class CorpusReport:
    config: dict
    counters: dict[str, dict[int, dict[str, int]]]
    counterexamples: list[CounterexampleRecord] = field(default_factory=list)
    paper_exceptions: list[CounterexampleRecord] = field(default_factory=list)
    undecided: list[CounterexampleRecord] = field(default_factory=list)
    wall_ms: int | None = field(default=None, compare=False)

    def totals(self, suite: str) -> dict[str, int]:
        out = dict.fromkeys(COUNTER_KEYS, 0)
        for c in self.counters.get(suite, {}).values():
            for k in COUNTER_KEYS:
                out[k] += c[k]
        return out

    @property
    def violations(self) -> int:
        return sum(self.totals(s)["violations"] for s in self.counters)

    def to_dict(self, timing: bool = False) -> dict:
        return {
            "config": self.config,
            "suites": {s: self.totals(s) for s in sorted(self.counters)},
            "by_n": {s: {str(n): dict(c) for n, c in sorted(per.items())}
                     for s, per in sorted(self.counters.items())},
            "counterexamples": [asdict(r) for r in self.counterexamples],
            "paper_exceptions": [asdict(r) for r in self.paper_exceptions],
            "undecided": [asdict(r) for r in self.undecided],
            "wall_ms": self.wall_ms if timing else None,
        }

    @classmethod
    def from_dict(cls, d: dict) -> CorpusReport:
        recs = lambda key: [CounterexampleRecord(**r) for r in d.get(key, [])]
        return cls(
            config=d["config"],
            counters={s: {int(n): dict(c) for n, c in per.items()} for s, per in d["by_n"].items()},
            counterexamples=recs("counterexamples"),
            paper_exceptions=recs("paper_exceptions"),
            undecided=recs("undecided"),
            wall_ms=d.get("wall_ms"),
        )


# ---------------------------------------------------------------- corpora

def enumerate_labeled(n: int) -> Iterator[Graph]:
    """All labeled graphs on n vertices, in edge-bitmask order."""
    if not 1 <= n <= LABELED_MAX_N:
        raise ConfigError(f"labeled enumeration supports 1 <= n <= {LABELED_MAX_N}")
    for mask in range(1 << (n * (n - 1) // 2)):
        yield Graph.from_mask(n, mask)


def random_graphs(count: int, n_min: int, n_max: int, seed: int = 0) -> Iterator[Graph]:
    """G(n, 1/2) samples with n uniform in [n_min, n_max]; reproducible from seed."""
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(n_min, n_max)
        yield Graph.from_mask(n, rng.getrandbits(n * (n - 1) // 2) if n > 1 else 0)


def read_graph6_stream(source: TextIO | Iterable[str],
                       errors: list | None = None) -> Iterator[tuple[int, Graph]]:
    """Yield (line number, graph) for every nonempty, non-header line.

    Parse failures raise Graph6StreamError, unless an ``errors`` list is
    given, in which case they are appended there and skipped.
    """
    for lineno, line in enumerate(source, 1):
        s = line.strip()
        if not s or (s.startswith(">>") and s.endswith("<<")):
            continue
        try:
            yield lineno, parse_graph6(s)
        except (Graph6Error, ValueError) as exc:
            err = Graph6StreamError(lineno, str(exc))
            if errors is None:
                raise err from exc
            errors.append(err)


# ---------------------------------------------------------------- per-graph suites

def _sic_from(pre, i, g):
    if pre is None:
        return th.spectral_index_count(g)
    return th.SpectralIndexCount(int(pre["a"][i]), int(pre["m"][i]))


def _suite_th1(g, pre, i):
    if g.n < 2:
        return None
    v = th.check_th1(g, _sic_from(pre, i, g))
    return _status(v)


def _suite_th2(g, pre, i):
    if g.n < 2:
        return None
    return _status(th.check_m2_identity(g, _sic_from(pre, i, g)))


def _suite_th3(g, pre, i):
    if g.n < 2 or g.edge_count() == g.n * (g.n - 1) // 2:
        return None
    if pre is None:
        v = th.check_th3(g)
    else:
        v = th.check_th3(g, int(pre["above_delta"][i]), int(pre["mult_delta"][i]))
    return _status(v)


def _suite_th4(g, pre, i):
    if pre is None:
        nullity = xl.int_eigen_multiplicity(xl.q_matrix(g), 0)
    else:
        nullity = int(pre["mult0"][i])
    b = bipartite_profile(g).b
    ok = nullity == b
    return ("holds" if ok else "violation"), {"nullity": str(nullity), "b": str(b)}


def _suite_das(g, pre, i):
    if g.n < 2:
        return None
    ds = degree_stats(g)
    if pre is None:
        ok_dbar, ok_d2 = th.das_lower_bounds(g)
    else:
        ok_d2 = int(pre["above_d2"][i]) + int(pre["mult_d2"][i]) >= 2
        # q_2 >= ceil(dbar - 1) settles the rational threshold; otherwise go exact
        ok_dbar = int(pre["above_dbar"][i]) + int(pre["mult_dbar"][i]) >= 2
        if not ok_dbar:
            ok_dbar = th.q2_at_least(g, ds.dbar - 1)
    ok = ok_dbar and ok_d2
    return ("holds" if ok else "violation"), {
        "dbar_minus_1": str(ds.dbar - 1), "Delta2_minus_1": str(ds.Delta2 - 1),
        "holds_dbar": ok_dbar, "holds_delta2": ok_d2}


def _suite_weyl(g, pre, i):
    if g.n < 2:
        return None
    n = g.n
    a, b = xl.q_matrix(g), xl.q_matrix(complement(g))
    bad, undecided = [], []
    for ii in range(1, n + 1):
        for jj in range(n + 1 - ii, n + 1):
            try:
                verdicts = weyl_check(a, b, ii, jj)
            except NumericEqualityUndecidable as exc:
                verdicts = (exc.verdict,)
                undecided.append([ii, jj])
            for v in verdicts:
                if v.side == "Wein1" and not v.holds:
                    bad.append({"i": ii, "j": jj, "lhs": str(v.lhs), "rhs": str(v.rhs)})
    detail: dict = {}
    if _sic_from(pre, i, g).m2 >= 1:
        v = weyl_check(a, b, 2, n)[0]
        detail["so_equality"] = bool(v.equality)
        detail["certificate"] = list(v.certificate) if v.certificate else None
        if not v.equality or v.certificate is None:
            bad.append({"i": 2, "j": n, "missing": "equality with common eigenvector"})
    if bad:
        detail["failures"] = bad
    if undecided:
        detail["undecided_pairs"] = undecided
    return ("violation" if bad else "holds"), detail


def _status(v: th.TheoremVerdict):
    if v.exception:
        status = "exception"
    elif v.agree:
        status = "holds"
    else:
        status = "violation"
    if status == "holds":
        return status, {}
    detail = {k: (x if isinstance(x, (bool, str)) else str(x)) for k, x in v.detail.items()}
    detail["structural"] = v.structural
    detail["spectral"] = v.spectral
    if v.notes:
        detail["notes"] = list(v.notes)
    if v.certificates and status != "holds":
        detail["certificates"] = [list(c) for c in v.certificates]
    return status, detail


_SUITE_FUNCS = {"th1": _suite_th1, "th2": _suite_th2, "th3": _suite_th3,
                "th4": _suite_th4, "das": _suite_das, "weyl": _suite_weyl}


def _precompute(n: int, masks: list[int], suites) -> dict | None:
    if n > BATCH_MAX_N:
        return None
    sb = SpectralBatch(n, np.array(masks, dtype=np.int64))
    pre = {}
    if {"th1", "th2", "weyl"} & set(suites):
        pre["a"], pre["m"] = sb.counts(n - 2)
    if "th4" in suites:
        pre["mult0"] = sb.counts(0)[1]
    if "th3" in suites:
        pre["above_delta"], pre["mult_delta"] = sb.counts(sb.degrees.min(axis=1))
    if "das" in suites:
        degs = np.sort(sb.degrees, axis=1)
        d2 = degs[:, -2] if n > 1 else degs[:, -1]
        pre["above_d2"], pre["mult_d2"] = sb.counts(d2 - 1)
        # ceil(2e/n - 1) as an integer threshold
        pre["above_dbar"], pre["mult_dbar"] = sb.counts(-((-(degs.sum(axis=1) - n)) // n))
    return pre


class _Partial:
    def __init__(self):
        self.counters: dict = defaultdict(lambda: defaultdict(lambda: dict.fromkeys(COUNTER_KEYS, 0)))
        self.counterexamples: list = []
        self.paper_exceptions: list = []
        self.undecided: list = []

    def add(self, suite, n, status, g6, detail):
        c = self.counters[suite][n]
        c["checked"] += 1
        if status == "holds":
            c["holds"] += 1
        elif status == "exception":
            c["exceptions"] += 1
            self.paper_exceptions.append(CounterexampleRecord(g6, suite, detail))
        else:
            c["violations"] += 1
            self.counterexamples.append(CounterexampleRecord(g6, suite, detail))
        if detail.get("undecided_pairs"):
            self.undecided.append(CounterexampleRecord(
                g6, suite, {"pairs": detail["undecided_pairs"]}))

    def merge(self, other: _Partial):
        for s, per in other.counters.items():
            for n, c in per.items():
                mine = self.counters[s][n]
                for k in COUNTER_KEYS:
                    mine[k] += c[k]
        self.counterexamples += other.counterexamples
        self.paper_exceptions += other.paper_exceptions
        self.undecided += other.undecided

    def plain(self):
        self.counters = {s: {n: dict(c) for n, c in per.items()} for s, per in self.counters.items()}
        return self


def _run_chunk(job) -> _Partial:
    n, masks, suites = job
    masks = list(masks)
    part = _Partial()
    graph_suites = [s for s in suites if s in _SUITE_FUNCS]
    pre = _precompute(n, masks, graph_suites)
    for i, mask in enumerate(masks):
        g = Graph.from_mask(n, mask)
        for suite in graph_suites:
            try:
                res = _SUITE_FUNCS[suite](g, pre, i)
            except Exception as exc:
                raise RunError(f"suite {suite} failed on graph6 {write_graph6(g)}: {exc!r}") from None
            if res is not None:
                status, detail = res
                part.add(suite, n, status, write_graph6(g) if status != "holds" or
                         detail.get("undecided_pairs") else "", detail)
    return part.plain()


def _k1t_partial() -> _Partial:
    part = _Partial()
    for t in range(2, 6):
        for r in range(2, 5):
            n = t * r + 1
            if n > xl.MAX_CHARPOLY_N:
                continue
            g = th.k1t_graph(t, r)
            exact = xl.char_poly(xl.q_matrix(g))
            closed = th.k1t_charpoly(t, r)
            roots = th.k1t_q1_q2(t, r)
            vals = q_spectrum(g).values
            delta = degree_stats(g).delta
            q2_is_delta = th.q2_at_least(g, delta) and not xl.count_roots_above(exact, delta) >= 2
            ok = (closed == exact and abs(roots.q1 - vals[0]) <= 1e-9
                  and abs(roots.q2 - vals[1]) <= 1e-9 and roots.q2_is_delta == q2_is_delta)
            detail = {"t": t, "r": r, "charpoly": str(closed), "q1": repr(roots.q1),
                      "q2": repr(roots.q2), "q2_is_delta": roots.q2_is_delta}
            part.add("k1t", n, "holds" if ok else "violation", write_graph6(g), detail)
    return part.plain()


# ---------------------------------------------------------------- driver

def corpus_for(cfg: SearchConfig, stdin: TextIO | None = None) -> Iterator[Graph]:
    if cfg.source == "labeled":
        for n in range(cfg.n_min, cfg.n_max + 1):
            yield from enumerate_labeled(n)
    elif cfg.source == "random":
        yield from random_graphs(cfg.random_count, cfg.n_min, cfg.n_max, cfg.seed)
    else:
        fh = (stdin or sys.stdin) if cfg.source == "-" else open(cfg.source, encoding="ascii")
        try:
            for _, g in read_graph6_stream(fh):
                if cfg.n_min <= g.n <= cfg.n_max:
                    yield g
        finally:
            if fh is not stdin and fh is not sys.stdin:
                fh.close()


def _labeled_jobs(cfg: SearchConfig, suites):
    for n in range(cfg.n_min, cfg.n_max + 1):
        total = 1 << (n * (n - 1) // 2)
        for start in range(0, total, cfg.chunk_size):
            yield n, range(start, min(total, start + cfg.chunk_size)), suites


def _stream_jobs(graphs: Iterable[Graph], cfg: SearchConfig, suites):
    buffers: dict[int, list[int]] = defaultdict(list)
    seen: set[bytes] = set()
    for g in graphs:
        if cfg.dedupe:
            key = canonical_key(g)
            if key in seen:
                continue
            seen.add(key)
        buf = buffers[g.n]
        buf.append(g.mask())
        if len(buf) >= cfg.chunk_size:
            yield g.n, list(buf), suites
            buf.clear()
    for n in sorted(buffers):
        if buffers[n]:
            yield n, buffers[n], suites


def run_verification(cfg: SearchConfig, graphs: Iterable[Graph] | None = None) -> CorpusReport:
    """Run every enabled suite over the corpus and collect a sorted report.

    With ``graphs`` omitted the corpus comes from ``cfg.source``.  Violations
    never stop the run; a crash inside a suite surfaces as RunError naming
    the graph.
    """
    t0 = time.perf_counter()
    suites = tuple(s for s in cfg.suites if s != "k1t")
    total = _Partial()
    if suites:
        if graphs is None and cfg.source == "labeled" and not cfg.dedupe:
            jobs = _labeled_jobs(cfg, suites)
        else:
            jobs = _stream_jobs(graphs if graphs is not None else corpus_for(cfg), cfg, suites)
        if cfg.jobs == 1:
            for part in map(_run_chunk, jobs):
                total.merge(part)
        else:
            with multiprocessing.get_context("spawn").Pool(cfg.jobs) as pool:
                for part in pool.imap(_run_chunk, jobs):
                    total.merge(part)
    if "k1t" in cfg.suites:
        total.merge(_k1t_partial())
    total.plain()
    key = lambda r: (r.graph6, r.suite)
    rep = CorpusReport(
        config=cfg.echo(),
        counters={s: {n: total.counters[s][n] for n in sorted(total.counters[s])}
                  for s in sorted(total.counters)},
        counterexamples=sorted(total.counterexamples, key=key),
        paper_exceptions=sorted(total.paper_exceptions, key=key),
        undecided=sorted(total.undecided, key=key),
    )
    rep.wall_ms = round((time.perf_counter() - t0) * 1000)
    log.info("verification finished in %d ms", rep.wall_ms)
    return rep


# ---------------------------------------------------------------- output

def report_json(rep: CorpusReport, timing: bool = False) -> str:
    # wall time is left null unless asked for, so reruns stay byte-identical
    return json.dumps(rep.to_dict(timing), indent=2, sort_keys=True) + "\n"


def report_csv(rep: CorpusReport, timing: bool = False) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("n", "suite") + COUNTER_KEYS)
    for suite in sorted(rep.counters):
        for n, c in sorted(rep.counters[suite].items()):
            w.writerow((n, suite) + tuple(c[k] for k in COUNTER_KEYS))
    return buf.getvalue()


def report_text(rep: CorpusReport, timing: bool = True) -> str:
    cfg = rep.config
    lines = [f"corpus: {cfg['source']} n={cfg['n_min']}..{cfg['n_max']}"
             + (" (deduplicated)" if cfg.get("dedupe") else "")]
    for suite in sorted(rep.counters):
        t = rep.totals(suite)
        lines.append(f"{suite:5s} checked {t['checked']:>8d}  holds {t['holds']:>8d}  "
                     f"exceptions {t['exceptions']:>6d}  violations {t['violations']:>4d}")
    for r in rep.counterexamples[:20]:
        lines.append(f"  counterexample {r.suite} {r.graph6} {json.dumps(r.detail, sort_keys=True)}")
    if rep.paper_exceptions:
        shown = ", ".join(sorted({r.graph6 for r in rep.paper_exceptions})[:10])
        lines.append(f"paper exceptions: {len(rep.paper_exceptions)} ({shown}"
                     + (", ..." if len(rep.paper_exceptions) > 10 else "") + ")")
    if rep.undecided:
        lines.append(f"numerically undecided Weyl equalities on {len(rep.undecided)} graphs")
    if timing and rep.wall_ms is not None:
        lines.append(f"wall time: {rep.wall_ms} ms")
    lines.append(f"VIOLATIONS: {rep.violations}")
    return "\n".join(lines) + "\n"


def emit_report(rep: CorpusReport, fmt: str = "json", path: str | None = None,
                timing: bool = False) -> str:
    render = {"json": report_json, "csv": report_csv, "text": report_text}
    if fmt not in render:
        raise ConfigError(f"unknown report format {fmt!r}")
    text = render[fmt](rep, timing)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text

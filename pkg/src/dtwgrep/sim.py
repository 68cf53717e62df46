"""Mutation and sequencing-error simulation comparing edit distance with DTW.

A reference genome ``G`` is mutated once into ``G'``; reads are cut from
``G'``, given sequencing errors (substitutions and homopolymer insertions) and
matched back against ``G``. Each read's offset is its best match distance
minus the number of mutations inside its span (its biological diversity).
"""
from __future__ import annotations

import csv
import io
import math
import os
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .baseline import INF, _edit_row_kernel, _last_row_kernel
from .rle import parse_fasta

DNA = "ACGT"
CSV_HEADER = ["p_hom", "reads", "mean_edit_offset", "mean_dtw_offset", "stddev_edit", "stddev_dtw"]

SUB, INS, DEL = "substitution", "insertion", "deletion"


@dataclass(frozen=True)
class MutationParams:
    p_sub: float = 0.01
    p_indel: float = 0.0005
    max_len_id: int = 10
    p_insert: float = 0.5  # share of indel events that are insertions
    alphabet: str = DNA

    def __post_init__(self):
        for name in ("p_sub", "p_indel", "p_insert"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.max_len_id < 1:
            raise ValueError("max_len_id must be positive")


@dataclass(frozen=True)
class ReadParams:
    read_len: int = 500
    p_seq_sub: float = 0.001
    p_hom: float = 0.0
    alphabet: str = DNA

    def __post_init__(self):
        for name in ("p_seq_sub", "p_hom"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.read_len < 1:
            raise ValueError("read_len must be positive")


@dataclass(frozen=True)
class MutationEvent:
    pos: int  # 0-based index into G' where the event's letters start (or, for a deletion, the gap before it)
    kind: str
    length: int


@dataclass
class MutationLog:
    events: list[MutationEvent] = field(default_factory=list)
    # origin[q] is the 0-based position of G that G'[q] came from (inserted letters
    # carry the position they replaced)
    origin: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def diversity(self, start: int, end: int) -> int:
        """Mutated letters inside ``G'[start:end]``; deletions count only strictly inside the span."""
        total = 0
        for e in self.events:
            if e.kind == SUB:
                total += int(start <= e.pos < end)
            elif e.kind == INS:
                total += max(0, min(e.pos + e.length, end) - max(e.pos, start))
            elif start < e.pos < end:
                total += e.length
        return total


def mutate_genome(G: str, params: MutationParams, rng: np.random.Generator) -> tuple[str, MutationLog]:
    out: list[str] = []
    origin: list[int] = []
    log = MutationLog()
    sigma = params.alphabet
    pos = 0
    n = len(G)
    while pos < n:
        if rng.random() < params.p_sub:
            choices = [a for a in sigma if a != G[pos]]
            log.events.append(MutationEvent(len(out), SUB, 1))
            out.append(choices[rng.integers(len(choices))])
            origin.append(pos)
            pos += 1
        elif rng.random() < params.p_indel:
            x = int(rng.integers(1, params.max_len_id + 1))
            if rng.random() < params.p_insert:
                log.events.append(MutationEvent(len(out), INS, x))
                out.extend(sigma[i] for i in rng.integers(len(sigma), size=x))
                origin.extend([pos] * x)
                pos += 1
            else:
                # skips G[pos..pos+x], which is x+1 letters
                log.events.append(MutationEvent(len(out), DEL, min(x + 1, n - pos)))
                pos += x + 1
        else:
            out.append(G[pos])
            origin.append(pos)
            pos += 1
    log.origin = np.array(origin, dtype=np.int64)
    return "".join(out), log


@dataclass(frozen=True)
class Read:
    seq: str
    start: int  # span G'[start:start + read_len]
    diversity: int
    seq_substitutions: int
    hom_insertions: int


def _read_draws(rng: np.random.Generator, genome_len: int, read_len: int):
    start = int(rng.integers(0, genome_len - read_len + 1))
    return start, rng.random(read_len), rng.integers(0, 3, size=read_len), rng.random(read_len)


def _apply_errors(span: str, draws, params: ReadParams) -> tuple[str, int, int]:
    u_sub, pick, u_hom = draws
    out: list[str] = []
    prev = None
    subs = homs = 0
    for i, c in enumerate(span):
        if u_sub[i] < params.p_seq_sub:
            others = [a for a in params.alphabet if a != c]
            c = others[pick[i] % len(others)]
            subs += 1
        out.append(c)
        if c == prev and u_hom[i] < params.p_hom:
            out.append(c)
            homs += 1
        prev = c
    return "".join(out), subs, homs


def sample_read(G_mut: str, log: MutationLog, params: ReadParams, rng: np.random.Generator) -> Read:
    if len(G_mut) < params.read_len:
        raise ValueError(f"mutated genome ({len(G_mut)}) is shorter than a read ({params.read_len})")
    start, *draws = _read_draws(rng, len(G_mut), params.read_len)
    span = G_mut[start:start + params.read_len]
    seq, subs, homs = _apply_errors(span, draws, params)
    return Read(seq, start, log.diversity(start, start + params.read_len), subs, homs)


# ----------------------------------------------------------------- matching


class _Encoder:
    def __init__(self, letters: str):
        self.letters = sorted(set(letters) | set(DNA))
        self.table = np.full(256, -1, dtype=np.int64)
        for i, a in enumerate(self.letters):
            self.table[ord(a)] = i
        n = len(self.letters)
        self.cost = (1 - np.eye(n)).astype(np.int64)

    def __call__(self, s: str) -> np.ndarray:
        codes = self.table[np.frombuffer(s.encode("ascii"), dtype=np.uint8)]
        if np.any(codes < 0):
            raise ValueError("sequence contains letters outside the genome alphabet")
        return codes


def best_distances(read: np.ndarray, genome: np.ndarray, cost: np.ndarray) -> tuple[int, int]:
    """Smallest substring edit distance and DTW distance of the read against the genome."""
    edit = int(_edit_row_kernel(read, genome).min())
    dtw = int(_last_row_kernel(read, genome, cost, INF)[1:].min())
    return edit, dtw


# ----------------------------------------------------------------- experiment


@dataclass(frozen=True)
class ReadRecord:
    p_hom: float
    index: int
    diversity: int
    edit: int
    dtw: int
    seq_substitutions: int
    hom_insertions: int

    @property
    def edit_offset(self) -> int:
        return self.edit - self.diversity

    @property
    def dtw_offset(self) -> int:
        return self.dtw - self.diversity


@dataclass
class ExperimentResult:
    rows: list[dict]
    records: list[ReadRecord]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow([f"{r['p_hom']:g}", r["reads"]] + [f"{r[k]:.6f}" for k in CSV_HEADER[2:]])
        return buf.getvalue()


def load_genome(source: str) -> str:
    """``synthetic:<length>:<seed>`` or a FASTA path (first record)."""
    if source.startswith("synthetic:"):
        try:
            _, length, seed = source.split(":")
            length, seed = int(length), int(seed)
        except ValueError:
            raise ValueError(f"bad synthetic genome spec {source!r}; want synthetic:<length>:<seed>") from None
        rng = np.random.Generator(np.random.PCG64(seed))
        return "".join(DNA[i] for i in rng.integers(0, 4, size=length))
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read genome {source!r}: {exc.strerror}") from None
    records = parse_fasta(text)
    if not records:
        raise ValueError(f"{source}: no FASTA records")
    return next(iter(records.values()))


def parse_grid(spec: str) -> list[float]:
    """``a:b:step`` inclusive of both ends, e.g. ``0:0.9:0.1`` gives ten points."""
    try:
        a, b, step = (float(x) for x in spec.split(":"))
    except ValueError:
        raise ValueError(f"bad grid {spec!r}; want a:b:step") from None
    if step <= 0 or b < a:
        raise ValueError(f"bad grid {spec!r}")
    count = int(math.floor((b - a) / step + 1e-9)) + 1
    return [round(a + i * step, 10) for i in range(count)]


def thread_count() -> int:
    env = os.environ.get("DTW_GREP_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _mutation_seed(master: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(master, spawn_key=(0,))


def _read_seed(master: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(master, spawn_key=(1, index))


def run_experiment(genome_source: str, p_hom_grid: Sequence[float], reads_per_point: int, master_seed: int,
                   mutation: MutationParams | None = None, read_params: ReadParams | None = None,
                   threads: int | None = None) -> ExperimentResult:
    """Mean edit and DTW offsets per ``p_hom``.

    Read ``i`` uses the same start and error draws at every grid point, so the
    grid points differ only in which homopolymer insertions fire.
    """
    mutation = mutation or MutationParams()
    base = read_params or ReadParams()
    G = load_genome(genome_source)
    G_mut, log = mutate_genome(G, mutation, np.random.Generator(np.random.PCG64(_mutation_seed(master_seed))))
    if reads_per_point and len(G_mut) < base.read_len:
        raise ValueError(f"mutated genome ({len(G_mut)}) is shorter than a read ({base.read_len})")
    enc = _Encoder(G + G_mut + base.alphabet)
    genome = enc(G)
    cost = enc.cost

    def one(task):
        p_hom, index = task
        params = ReadParams(base.read_len, base.p_seq_sub, p_hom, base.alphabet)
        rng = np.random.Generator(np.random.PCG64(_read_seed(master_seed, index)))
        read = sample_read(G_mut, log, params, rng)
        edit, dtw = best_distances(enc(read.seq), genome, cost)
        return ReadRecord(p_hom, index, read.diversity, edit, dtw, read.seq_substitutions, read.hom_insertions)

    tasks = [(p, i) for p in p_hom_grid for i in range(reads_per_point)]
    workers = min(threads or thread_count(), max(1, len(tasks)))
    if workers == 1:
        records = [one(t) for t in tasks]
    else:
        with ThreadPoolExecutor(workers) as pool:
            records = list(pool.map(one, tasks))  # map keeps task order

    rows = []
    for p in p_hom_grid if reads_per_point else []:
        group = [r for r in records if r.p_hom == p]
        edits = [r.edit_offset for r in group]
        dtws = [r.dtw_offset for r in group]
        rows.append({
            "p_hom": p,
            "reads": len(group),
            "mean_edit_offset": statistics.fmean(edits),
            "mean_dtw_offset": statistics.fmean(dtws),
            "stddev_edit": statistics.stdev(edits) if len(edits) > 1 else 0.0,
            "stddev_dtw": statistics.stdev(dtws) if len(dtws) > 1 else 0.0,
        })
    return ExperimentResult(rows, records)


def write_csv(result: ExperimentResult, path: str | Path) -> None:
    Path(path).write_text(result.to_csv())

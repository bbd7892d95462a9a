"""PL classification of crystallization lists via theta-sequences.

theta_{i,c,x,tau} inserts a blob over the c-edge at v_i, performs the
possible s-flips pairing the blob's tau(k)-coloured edge with the
tau(k)-coloured edge at v_{x_k} (k ascending over the colours other than
c), and reduces to rigid dipole-free form.  Two list members fall in the
same PL class when some of their theta-images share a canonical code;
merging happens only on literal code equality, so any exploration schedule
is sound.  Classes are "not merged" rather than "proved distinct".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations

from .code import canonical_form, code
from .errors import (
    ConflictingLabels,
    DimensionMismatch,
    NoAdmissiblePairing,
    NotAFlipConfiguration,
)
from .moves import _is_dipole, insert_blob, reduce_gem, s_flip

DEFAULT_BUDGET = 2000
DEFAULT_PASSES = 8


@dataclass(frozen=True)
class ThetaParams:
    """Parameters of one admissible sequence: blob position (i, c), flip
    targets x (one per colour of hat-c = Delta_n - {c}, in increasing
    colour order) and flip colour assignment tau (a permutation of hat-c,
    tau[j] being the colour flipped at step j)."""

    i: int
    c: int
    x: tuple
    tau: tuple


def theta_space_size(order, n_plus_one):
    n = n_plus_one - 1
    fact = 1
    for j in range(2, n + 1):
        fact *= j
    return order * n_plus_one * order**n * fact


def theta_params_at(order, n_plus_one, index):
    """Decode the `index`-th ThetaParams in the deterministic enumeration:
    i, then c, then x lexicographic, then tau lexicographic."""
    n = n_plus_one - 1
    taus = _tau_cache(n)
    ntau = len(taus)
    index, t = divmod(index, ntau)
    xs = []
    for _ in range(n):
        index, r = divmod(index, order)
        xs.append(r + 1)
    xs.reverse()
    index, c = divmod(index, n_plus_one)
    i = index + 1
    hat_c = tuple(d for d in range(n_plus_one) if d != c)
    tau = tuple(hat_c[j] for j in taus[t])
    return ThetaParams(i=i, c=c, x=tuple(xs), tau=tau)


_TAUS = {}


def _tau_cache(n):
    try:
        return _TAUS[n]
    except KeyError:
        ps = tuple(permutations(range(n)))
        _TAUS[n] = ps
        return ps


def apply_theta(g, params):
    """One admissible sequence on a canonically numbered rigid dipole-free
    crystallization; returns (reduced graph, (orientable handles,
    non-orientable handles)).  Impossible flips are skipped, not errors."""
    ncol = g.n_plus_one
    u1, u2 = g.order + 1, g.order + 2
    h = insert_blob(g, params.i, params.c)
    hat_c = tuple(d for d in range(ncol) if d != params.c)
    for j, _k in enumerate(hat_c):
        d = params.tau[j]
        if h.matchings[d][u1] != u2:
            continue  # the blob's d-edge was already flipped away
        target = params.x[j]
        f = (target, h.matchings[d][target])
        if {u1, u2} & set(f):
            continue
        try:
            h = s_flip(h, d, (u1, u2), f)
        except (NotAFlipConfiguration, NoAdmissiblePairing):
            continue
    reduced, h_or, h_non = reduce_gem(h)
    return reduced, (h_or, h_non)


class ClassPartition:
    """Union-find over the input graphs plus the code->owner map recording
    every reduced theta-image seen."""

    def __init__(self, graphs, codes):
        self.graphs = list(graphs)
        self.codes = list(codes)
        self._parent = list(range(len(self.graphs)))
        self.owner = {}
        self.witnesses = []
        self.labels = {}
        self.passes_done = 0
        for idx, c in enumerate(self.codes):
            prev = self.owner.setdefault((c, 0, 0), idx)
            if prev != idx:
                # two inputs with one code are the same crystallization
                self.union(idx, prev)

    def find(self, a):
        while self._parent[a] != a:
            self._parent[a] = self._parent[self._parent[a]]
            a = self._parent[a]
        return a

    def union(self, a, b, witness=None):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self._parent[rb] = ra
        if witness is not None:
            self.witnesses.append(witness)
        return True

    def classes(self):
        """Member indices per class, ordered by smallest member."""
        buckets = {}
        for idx in range(len(self.graphs)):
            buckets.setdefault(self.find(idx), []).append(idx)
        return [buckets[r] for r in sorted(buckets)]

    def class_of(self, idx):
        return self.find(idx)


def theta_schedule(order, n_plus_one, budget, pass_no):
    """The parameter indices explored for one graph in one pass: an
    arithmetic progression spread across the whole space (a contiguous
    prefix of the lexicographic order varies only the innermost fields, so
    a stride is used instead), shifted by the pass number so successive
    passes explore fresh parameters."""
    space = theta_space_size(order, n_plus_one)
    stride = max(1, space // budget)
    return [
        k * stride + pass_no
        for k in range(min(budget, space))
        if k * stride + pass_no < space
    ]


def _theta_batch(args):
    matchings, order, ncol, indices, idx = args
    from .graph import ColouredGraph

    g = ColouredGraph(ncol, order, matchings, _validated=True)
    out = []
    for pindex in indices:
        params = theta_params_at(order, ncol, pindex)
        reduced, (h_or, h_non) = apply_theta(g, params)
        out.append((idx, code(reduced), h_or, h_non, pindex))
    return out


def classify(graphs, budget=DEFAULT_BUDGET, passes=DEFAULT_PASSES, jobs=None):
    """Partition a list of rigid dipole-free crystallizations into
    PL-homeomorphism classes.

    Per pass, each graph gets `budget` theta applications drawn from the
    deterministic strided schedule (`theta_schedule`); a reduced image
    whose (code, handle counts) was already seen merges the two graphs.
    Stops early once a full pass produces no merge.
    """
    if not graphs:
        return ClassPartition([], [])
    ncol = graphs[0].n_plus_one
    for g in graphs:
        if g.n_plus_one != ncol:
            raise DimensionMismatch("classification inputs must share one dimension")
    canon = [canonical_form(g) for g in graphs]
    codes = [code(g) for g in canon]
    part = ClassPartition(canon, codes)
    for pass_no in range(passes):
        merged = False
        tasks = []
        for idx, g in enumerate(canon):
            indices = theta_schedule(g.order, ncol, budget, pass_no)
            if indices:
                tasks.append((g.matchings, g.order, ncol, indices, idx))
        part.passes_done += 1
        if not tasks:
            break
        if jobs and jobs > 1:
            import multiprocessing as mp

            ctx = mp.get_context("fork")
            with ctx.Pool(jobs) as pool:
                results = pool.map(_theta_batch, tasks, chunksize=1)
        else:
            results = [_theta_batch(t) for t in tasks]
        for batch in results:
            for idx, img_code, h_or, h_non, pindex in batch:
                key = (img_code, h_or, h_non)
                prev = part.owner.get(key)
                if prev is None:
                    part.owner[key] = idx
                elif part.union(
                    idx,
                    prev,
                    witness={
                        "a": codes[idx],
                        "b": codes[prev],
                        "image": img_code,
                        "handles": [h_or, h_non],
                        "theta_index": pindex,
                    },
                ):
                    merged = True
        if not merged:
            break
    return part


def label_classes(part, representatives, fallback=None):
    """Attach manifold labels: each class containing a representative
    (given as label -> input index or code) inherits its label; when
    exactly one class remains unlabelled and `fallback` is given, it gets
    the fallback label (the by-elimination case)."""
    code_index = {c: i for i, c in enumerate(part.codes)}
    for label, rep in representatives.items():
        idx = rep if isinstance(rep, int) else code_index[rep]
        root = part.find(idx)
        existing = part.labels.get(root)
        if existing is not None and existing != label:
            raise ConflictingLabels(
                f"class of {rep} already labelled {existing}, got {label}"
            )
        part.labels[root] = label
    unlabelled = [cls for cls in part.classes() if part.find(cls[0]) not in part.labels]
    if fallback is not None and len(unlabelled) == 1:
        part.labels[part.find(unlabelled[0][0])] = fallback
    return part


def partition_report(part):
    """One structured record per class: id, optional label, member codes,
    size, and the merge witnesses internal to the class."""
    records = []
    for cls in part.classes():
        root = part.find(cls[0])
        members = sorted(part.codes[i] for i in cls)
        member_set = set(members)
        merges = [
            w for w in part.witnesses if w["a"] in member_set or w["b"] in member_set
        ]
        records.append(
            {
                "class_id": part.codes[root],
                "label": part.labels.get(root),
                "size": len(cls),
                "members": members,
                "merged_by": merges,
            }
        )
    return records


def format_report(records):
    return "\n".join(json.dumps(r, sort_keys=True) for r in records) + "\n"

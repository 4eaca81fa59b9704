"""Verification suites and the report they produce.

Each check is a function of a :class:`RunContext` returning a JSON-serialisable
witness. A check passes when it returns and fails when it raises; the exception is
recorded in the witness and the suite carries on. Checks run in a thread pool and
are reported in declaration order, so the report does not depend on the number of
workers.

Example::

    report = run("plane")
    assert report.exit_code == 0
    print(report.to_json(timings=False))
"""

import functools
import itertools
import json
import time
from collections import Counter
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import torch
from tqdm import tqdm

from enriqueslab import char2, graphs, lattice, plane, sylvester, vinberg
from enriqueslab.fields import binary_field
from enriqueslab.math import det_lattice, exact_signature
from enriqueslab.typing import (
    SCHEMA,
    CertificateError,
    CheckStatus,
    PreconditionError,
    SuiteName,
)


SUITES: tuple[SuiteName, ...] = ("plane", "lattice", "gamma", "vinberg", "char2")
N_RANDOM_SPECIALIZATIONS = 20
N_LEIBNIZ_PAIRS = 200
N_COLLINEATIONS = 20


@dataclass(frozen=True)
class RunConfig:
    """Options of a verification run.

    Attributes:
        suite (SuiteName): Suite to run, or ``"all"``.
        config_index (int): Index of the contraction configuration in canonical order.
        seed (int): Seed of the randomised property checks.
        workers (int): Threads running checks.
        pbar (bool): Show progress over checks.
    """

    suite: SuiteName = "all"
    config_index: int = 0
    seed: int = 0
    workers: int = 1
    pbar: bool = False

    def __post_init__(self) -> None:
        if self.suite != "all" and self.suite not in SUITES:
            raise ValueError(f"{self.suite=} is not one of {('all', *SUITES)}")
        if self.workers < 1:
            raise ValueError(f"{self.workers=} must be positive")
        if self.config_index < 0:
            raise ValueError(f"{self.config_index=} must be non-negative")


class RunContext:
    """Shared inputs of the checks, built on first use."""

    def __init__(self, config: RunConfig) -> None:
        """Bind the run options.

        Args:
            config (RunConfig): Run options.
        """
        self.config = config

    def rng(self, salt: int) -> np.random.Generator:
        """Generator seeded by the run seed and a per-check salt."""
        return np.random.default_rng([self.config.seed, salt])

    @functools.cached_property
    def ns(self) -> lattice.NsY:
        """NS(Y)."""
        return lattice.build_ns_y()

    @functools.cached_property
    def configs(self) -> tuple[lattice.ContractionConfig, ...]:
        """All contraction configurations."""
        return lattice.find_contraction_configs()

    @functools.cached_property
    def cfg(self) -> lattice.ContractionConfig:
        """The selected contraction configuration."""
        if self.config.config_index >= len(self.configs):
            raise IndexError(
                f"{self.config.config_index=} but only {len(self.configs)} configurations"
            )
        return self.configs[self.config.config_index]

    @functools.cached_property
    def numx(self) -> lattice.NumX:
        """Num(X) for the selected configuration."""
        return lattice.orthogonal_complement(self.ns, self.cfg)

    @functools.cached_property
    def gamma_vectors(self) -> lattice.GammaVectors:
        """The 40 labelled vectors of Num(X)."""
        return lattice.gamma_vectors(self.numx, self.cfg)

    @functools.cached_property
    def lattice_gamma(self) -> graphs.IntersectionGraph:
        """Graph of the 40 vectors."""
        return lattice.lattice_gamma(self.numx, self.cfg)


CheckFunction = Callable[[RunContext], dict[str, Any]]


@dataclass(frozen=True)
class Check:
    """A registered check.

    Attributes:
        check_id (str): Stable identifier, ``<suite>.<name>``.
        suite (SuiteName): Owning suite.
        anchor (str): The claim the check confirms, or ``"plumbing"``.
        function (CheckFunction): Computes the witness; raises on failure.
    """

    check_id: str
    suite: SuiteName
    anchor: str
    function: CheckFunction


CHECKS: list[Check] = []


def check(
    suite: SuiteName, name: str, anchor: str
) -> Callable[[CheckFunction], CheckFunction]:
    """Register a check function under ``<suite>.<name>``."""

    def register(function: CheckFunction) -> CheckFunction:
        check_id = f"{suite}.{name}"
        if any(c.check_id == check_id for c in CHECKS):
            raise ValueError(f"{check_id=} is registered twice")
        CHECKS.append(Check(check_id, suite, anchor, function))
        return function

    return register


def _require(condition: bool, message: str) -> None:  # noqa: FBT001
    if not condition:
        raise CertificateError(message)


@dataclass(frozen=True)
class CheckRecord:
    """Outcome of one check.

    Attributes:
        check_id (str): Identifier of the check.
        anchor (str): The claim confirmed.
        status (CheckStatus): ``"pass"``, ``"fail"`` or ``"skipped"``.
        witness (dict[str, Any]): Evidence, or the error on failure.
        elapsed_ms (float): Wall time.
    """

    check_id: str
    anchor: str
    status: CheckStatus
    witness: dict[str, Any]
    elapsed_ms: float

    def to_dict(self, *, timings: bool = True) -> dict[str, Any]:
        """JSON-ready form; ``timings=False`` drops the wall time."""
        out = {
            "check_id": self.check_id,
            "anchor": self.anchor,
            "status": self.status,
            "witness": self.witness,
        }
        if timings:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


@dataclass(frozen=True)
class VerificationReport:
    """Records of a run in declaration order.

    Attributes:
        config (RunConfig): Options of the run.
        records (tuple[CheckRecord, ...]): One record per check.
    """

    config: RunConfig
    records: tuple[CheckRecord, ...] = field(default_factory=tuple)

    def counts(self) -> dict[str, int]:
        """Number of records per status."""
        statuses = [r.status for r in self.records]
        return {s: statuses.count(s) for s in ("pass", "fail", "skipped")}

    @property
    def ok(self) -> bool:
        """Whether no check failed."""
        return all(r.status != "fail" for r in self.records)

    @property
    def exit_code(self) -> int:
        """0 when every non-skipped check passed, 1 otherwise."""
        return 0 if self.ok else 1

    def record(self, check_id: str) -> CheckRecord:
        """The record of one check.

        Raises:
            KeyError: If the check is not in the report.
        """
        for r in self.records:
            if r.check_id == check_id:
                return r
        raise KeyError(check_id)

    def to_dict(self, *, timings: bool = True) -> dict[str, Any]:
        """JSON-ready form."""
        return {
            "schema": SCHEMA,
            "kind": "verification-report",
            "suite": self.config.suite,
            "config_index": self.config.config_index,
            "seed": self.config.seed,
            "counts": self.counts(),
            "records": [r.to_dict(timings=timings) for r in self.records],
        }

    def to_json(self, *, timings: bool = True) -> str:
        """Sorted-key JSON; identical across reruns when ``timings`` is False."""
        return json.dumps(self.to_dict(timings=timings), indent=2, sort_keys=True)


def _execute(item: Check, context: RunContext) -> CheckRecord:
    start = time.perf_counter()
    try:
        witness = item.function(context)
        status: CheckStatus = "pass"
    except Exception as exc:  # noqa: BLE001
        witness = {"error": type(exc).__name__, "message": str(exc)}
        status = "fail"
    elapsed = 1000 * (time.perf_counter() - start)
    return CheckRecord(item.check_id, item.anchor, status, witness, elapsed)


def select_checks(suite: SuiteName) -> list[Check]:
    """Checks of a suite in declaration order; ``"all"`` selects every check."""
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"{suite=} is not one of {('all', *SUITES)}")
    return [c for c in CHECKS if suite in ("all", c.suite)]


def run(
    suite: SuiteName = "all",
    config: RunConfig | None = None,
    *,
    pbar: bool | dict[str, Any] | None = None,
) -> VerificationReport:
    """Run a suite and collect every outcome.

    Args:
        suite (SuiteName): Suite name, or ``"all"``. Overrides ``config.suite``.
        config (RunConfig | None): Options; defaults to ``RunConfig(suite)``.
        pbar (bool | dict[str, Any] | None, optional): Progress bar over checks, or
            tqdm keyword arguments. Defaults to ``config.pbar``.

    Returns:
        VerificationReport: One record per selected check.
    """
    config = RunConfig(suite) if config is None else RunConfig(
        suite, config.config_index, config.seed, config.workers, config.pbar
    )
    pbar = config.pbar if pbar is None else pbar
    selected = select_checks(config.suite)
    context = RunContext(config)

    pbar_kwargs = dict(pbar) if isinstance(pbar, dict) else {}
    pbar_kwargs.setdefault("desc", f"Suite {config.suite}")
    pbar_kwargs.setdefault("disable", not pbar)
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        futures = [pool.submit(_execute, c, context) for c in selected]
        records = tuple(f.result() for f in tqdm(futures, **pbar_kwargs))
    return VerificationReport(config, records)


# -- plane --------------------------------------------------------------------------


@check("plane", "incidence", "PG(2,4) has 21 points and 21 lines, five on each")
def _plane_incidence(_: RunContext) -> dict[str, Any]:
    inc = plane.incidence_matrix()
    points, lines = plane.enumerate_points(), plane.enumerate_lines()
    _require(len(points) == 21 and len(lines) == 21, "wrong number of points or lines")
    _require(bool((inc.sum(dim=0) == 5).all()), "a point is not on five lines")
    _require(bool((inc.sum(dim=1) == 5).all()), "a line does not hold five points")
    _require(bool(((inc @ inc.T).fill_diagonal_(1) == 1).all()), "two lines meet twice")
    return {"points": len(points), "lines": len(lines), "points_per_line": 5}


@check("plane", "torsion", "the nine 3-torsion points, triple tangents and transversals")
def _plane_torsion(_: RunContext) -> dict[str, Any]:
    torsion = plane.torsion_points()
    _require(
        set(plane.rational_points_on_cubic()) == set(torsion),
        "the rational points of the cubic are not the torsion points",
    )
    census = plane.line_census()
    _require(census == {"TripleTangent": 9, "Transversal": 12}, f"line census {census}")
    for p in torsion:
        kinds = [type(plane.line_type(L)).__name__ for L in plane.lines_through(p)]
        _require(
            kinds.count("TripleTangent") == 1 and kinds.count("Transversal") == 4,
            f"{p} lies on {kinds}",
        )
    return {"torsion_points": [str(p) for p in torsion], **census}


@check("plane", "sextuples", "168 general sets of six points")
def _plane_sextuples(_: RunContext) -> dict[str, Any]:
    points = plane.enumerate_points()
    table = plane.collinearity_table()
    for a, b, c in itertools.combinations(range(21), 3):
        _require(
            bool(table[a, b, c]) == plane.is_collinear(points[a], points[b], points[c]),
            f"collinearity table disagrees with determinants at {(a, b, c)}",
        )
    sextuples = plane.general_sextuples()
    _require(len(sextuples) == 168, f"{len(sextuples)} general sextuples")
    _require(
        all(plane.make_sextuple(s.points).general for s in sextuples),
        "a listed sextuple has three collinear points",
    )
    external = [plane.external_lines(s.points) for s in sextuples]
    _require(all(len(e) == 6 for e in external), "a sextuple misses other than six lines")
    return {"general_sextuples": len(sextuples), "external_lines_each": 6}


@check("plane", "collineations", "generality is invariant under collineations")
def _plane_collineations(context: RunContext) -> dict[str, Any]:
    rng = context.rng(1)
    general = {s.points for s in plane.general_sextuples()}
    for _ in range(N_COLLINEATIONS):
        matrix = plane.random_collineation(rng)
        images = {
            tuple(sorted(plane.apply_collineation(matrix, p) for p in s)) for s in general
        }
        _require(images == general, f"{matrix} does not permute the general sextuples")
    return {"collineations": N_COLLINEATIONS, "seed": context.config.seed}


@check("plane", "pencil", "the transversals form the four triangles of the cubic pencil")
def _plane_pencil(_: RunContext) -> dict[str, Any]:
    triangles = plane.pencil_triangles()
    _require(len(triangles) == 4, f"{len(triangles)} triangles")
    used = [L for _, triple in triangles for L in triple]
    _require(
        set(used) == set(plane.transversals()), "triangles do not use every transversal"
    )
    return {
        "members": ["oo" if s is None else str(s) for s, _ in triangles],
        "triangles": [[str(L) for L in triple] for _, triple in triangles],
    }


# -- lattice ------------------------------------------------------------------------


@check("lattice", "ns_y", "NS(Y) is even of rank 22, signature (1,21) and determinant -4")
def _lattice_ns_y(context: RunContext) -> dict[str, Any]:
    ns = context.ns
    ell = lattice.ell_class(ns, plane.enumerate_lines()[0])
    return {
        "radical_rank": int(ns.radical_basis.shape[0]),
        "rank": ns.gram22.dimension,
        "signature": list(exact_signature(ns.gram22)),
        "det": det_lattice(ns.gram22),
        "even": ns.gram22.is_even,
        "ell_square": ns.pair(ell, ell),
    }


@check("lattice", "contractions", "ten Cremona vectors orthogonal to the contraction")
def _lattice_contractions(context: RunContext) -> dict[str, Any]:
    ns, cfg = context.ns, context.cfg
    orthogonal = lattice.orthogonal_cremona(ns, cfg)
    _require(len(orthogonal) == 10, f"{len(orthogonal)} orthogonal Cremona vectors")
    labels = sorted(str(lattice.cremona_label(cfg, c.sextuple)) for c in orthogonal)
    splittings = {
        lattice.triangle_splitting(cfg, c.sextuple) for c in orthogonal
    }
    _require(len(splittings) == 10, "two Cremona vectors share a triangle splitting")
    _require(
        labels == sorted(str(t) for t in sylvester.enumerate_tenvectors()),
        "the orthogonal Cremona vectors do not give the ten splittings of six letters",
    )
    external = [
        set(plane.external_lines(s.points)) == set(cfg.lines)
        for s in plane.general_sextuples()
    ]
    return {
        "configurations": len(context.configs),
        "config_index": context.config.config_index,
        "lines": [str(L) for L in cfg.lines],
        "points": [str(p) for p in cfg.points],
        "orthogonal": labels,
        "points_form_hyperoval_of_lines": any(external),
    }


@check("lattice", "num_x", "Num(X) is even unimodular of signature (1,9)")
def _lattice_num_x(context: RunContext) -> dict[str, Any]:
    numx = context.numx
    return {
        "complement_even": bool((numx.complement_gram.entries % 2 == 0).all()),
        "det": det_lattice(numx.gram10),
        "even": numx.gram10.is_even,
        "signature": list(exact_signature(numx.gram10)),
    }


@check("lattice", "exceptional_curves", "contracted curves map to (-1)-curves of genus 0")
def _lattice_exceptional(context: RunContext) -> dict[str, Any]:
    return {"curves": lattice.exceptional_curve_check(context.ns, context.cfg)}


# -- gamma --------------------------------------------------------------------------


@check("gamma", "identification", "the 40 vectors realise the duad-syntheme-total graph")
def _gamma_identification(context: RunContext) -> dict[str, Any]:
    combinatorial, realised = sylvester.combinatorial_gamma(), context.lattice_gamma
    _require(
        torch.equal(combinatorial.pairing.entries, realised.pairing.entries),
        "lattice pairings differ from the combinatorial pairings",
    )
    _require(
        graphs.find_isomorphism(realised, combinatorial) is not None,
        "no isomorphism found",
    )
    tens = [i for i, label in enumerate(combinatorial.labels) if label.count(",") == 1]
    block = combinatorial.pairing.restrict(tens).entries
    _require(
        bool((block + 4 * torch.eye(10, dtype=torch.int64) == 2).all()),
        "tenvector block is not complete with pairing 2",
    )
    for i in tens:
        row = combinatorial.pairing.entries[i]
        _require(
            int((row[:15] == 2).sum()) == 6 and int((row[15:30] == 2).sum()) == 6,
            f"{combinatorial.labels[i]} does not meet six duads and six synthemes twice",
        )
    return {"vertices": combinatorial.n_vertices, "tenvector_degree": [6, 6]}


@check("gamma", "automorphisms", "the automorphism group has order 1440")
def _gamma_automorphisms(_: RunContext) -> dict[str, Any]:
    group = graphs.automorphism_group(sylvester.combinatorial_gamma())
    _require(group.order == 1440, f"automorphism group of order {group.order}")
    permutations = sylvester.all_permutations()
    _require(
        all(sylvester.s6_action(g) in group for g in permutations),
        "a permutation of letters does not act",
    )
    _require(sylvester.outer_automorphism() in group, "the table involution does not act")
    orbits = graphs.orbit_census(sylvester.combinatorial_gamma(), group)
    return {
        "order": group.order,
        "letter_permutations": len(permutations),
        "generators": len(group.generators),
        "orbit_sizes": sorted(len(o) for o in orbits),
    }


# -- vinberg ------------------------------------------------------------------------


@check("vinberg", "maximal_parabolics", "maximal parabolic subdiagrams and their types")
def _vinberg_maximal(_: RunContext) -> dict[str, Any]:
    G = sylvester.combinatorial_gamma()
    components, diagrams = vinberg.gamma_parabolics()
    _require(all(t.rank <= vinberg.MAX_RANK for _, t in components), "rank above 8")
    found = {
        e.name: vinberg.locate_example(G, diagrams, e).describe(G)
        for e in vinberg.FIBRATION_EXAMPLES
    }
    census = vinberg.parabolic_census(diagrams)
    return {
        "connected_parabolics": len(components),
        "census": {"+".join(k): v for k, v in census.items()},
        "examples": found,
    }


@check("vinberg", "criterion", "every connected parabolic completes to rank 8")
def _vinberg_criterion(_: RunContext) -> dict[str, Any]:
    G = sylvester.combinatorial_gamma()
    components, diagrams = vinberg.gamma_parabolics()
    certificate = vinberg.vinberg_check(G, components=components, diagrams=diagrams)
    missing = len(certificate.missing())
    _require(certificate.verdict, f"{missing} components lack a completion")
    by_type = Counter(t for _, t in components)
    return {
        "verdict": certificate.verdict,
        "components": len(certificate.components),
        "by_type": {str(t): n for t, n in sorted(by_type.items())},
    }


@check(
    "vinberg", "multisections", "each displayed fibration has a 2-section among the 40"
)
def _vinberg_multisections(context: RunContext) -> dict[str, Any]:
    G = sylvester.combinatorial_gamma()
    _, diagrams = vinberg.gamma_parabolics()
    vectors, gram = context.gamma_vectors.coords, context.numx.gram10
    degrees = {}
    for example in vinberg.FIBRATION_EXAMPLES:
        diagram = vinberg.locate_example(G, diagrams, example)
        F = vinberg.fiber_class(diagram, vectors, gram)
        section = vectors[G.index(example.section)]
        degree = vinberg.multisection_degree(F, section, gram)
        _require(degree == 2, f"{example.section} has degree {degree} on {example.name}")
        degrees[example.name] = {"section": example.section, "degree": degree}
    return degrees


@check("vinberg", "without_tenvectors", "the 30 nodal classes alone")
def _vinberg_without_tenvectors(_: RunContext) -> dict[str, Any]:
    nodal = sylvester.combinatorial_gamma().subgraph(range(30))
    try:
        certificate = vinberg.vinberg_check(nodal)
    except PreconditionError as exc:
        return {"precondition": str(exc)}
    return {"verdict": certificate.verdict, "uncompleted": len(certificate.missing())}


# -- char2 --------------------------------------------------------------------------


@check("char2", "two_closed", "the vector field is 2-closed")
def _char2_two_closed(context: RunContext) -> dict[str, Any]:
    _require(char2.check_two_closed(), "D'^2 != t^2 D' over GF(2)(a)")
    _require(char2.check_two_closed(binary_field(2).zero), "D'^2 != t^2 D' at a = 0")
    sample = char2.random_parameters(context.rng(2), N_RANDOM_SPECIALIZATIONS)
    _require(
        all(char2.specialization_agrees(a) for a in sample),
        "a specialisation disagrees with the symbolic check",
    )
    factor = char2.closure_factor(char2.d_reduced())
    return {
        "closure_factor": str(char2.closure_factor(char2.d_prime())),
        "reduced_closure_factor": str(factor),
        "specializations": [str(a) for a in sample],
    }


@check("char2", "leibniz", "the vector field acts as a derivation")
def _char2_leibniz(context: RunContext) -> dict[str, Any]:
    rng = context.rng(3)
    D = char2.d_prime(binary_field(16).generator())
    for _ in range(N_LEIBNIZ_PAIRS):
        p, q = char2.random_polynomial(rng), char2.random_polynomial(rng)
        _require(char2.leibniz_holds(D, p, q), f"Leibniz fails on {p}, {q}")
    return {"pairs": N_LEIBNIZ_PAIRS}


@check("char2", "blowup_chart", "the vector field in a chart of the blow-up")
def _char2_blowup(_: RunContext) -> dict[str, Any]:
    char2.blowup_chart_check()
    chart = char2.chart_derivation()
    return {name: str(chart.coefficient(name)) for name in ("T", "U")}


@check("char2", "weierstrass", "the change of coordinates to Weierstrass form")
def _char2_weierstrass(_: RunContext) -> dict[str, Any]:
    witness = char2.weierstrass_transform_check()
    degenerate = char2.degenerate_fibres()
    return {
        "remainder": witness.remainder,
        "multiplier": witness.multiplier,
        "transcribed_remainder": witness.transcribed_remainder,
        "collapses_at": [str(r) for r in degenerate],
    }


@check("char2", "discriminant", "the discriminant is t^6 (t^3 + 1)^6")
def _char2_discriminant(_: RunContext) -> dict[str, Any]:
    _require(char2.universal_identity_holds(), "4 b8 != b2 b6 - b4^2 over the integers")
    W = char2.weierstrass_model()
    delta = char2.check_discriminant(W)
    zeros = delta.roots(4)
    orders = sum(m for _, m in zeros)
    _require(orders == 24, "orders of the discriminant do not sum to 24")
    hints = char2.fiber_multiplicity_hint(W)
    _require(all(h.reduction == "I6" and h.v_j == -6 for h in hints), f"{hints}")
    return {
        "discriminant": str(delta),
        "zeros": {str(r): m for r, m in zeros},
        "fibres": [h.reduction for h in hints],
    }


@check("char2", "euler", "Euler number of the quotient forces no isolated zeros")
def _char2_euler(context: RunContext) -> dict[str, Any]:
    result = char2.euler_formula_check(context.ns, context.cfg)
    _require(bool(result), f"{result}")
    return {
        "divisor_square": result.divisor_square,
        "canonical_pairing": result.canonical_pairing,
        "isolated_degree": result.isolated_degree,
        "eleven_curve_degree": result.contrast_degree,
        "c2_quotient": result.c2_quotient,
    }

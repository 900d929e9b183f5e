"""Command line interface.

Every subcommand resolves its flags into a CommandSpec, computes with the
library, writes one artifact atomically (CSV, JSON, or text), optionally
renders a PNG next to it, and prints a one-line summary. Exit codes: 0 on
success, 2 for usage and validation problems, 3 for numerical or I/O
failures, 4 for infeasible sectors.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from .ensemble import (
    OmegaSet,
    enumerate_sector,
    recurrent_classes,
    sector_is_feasible,
)
from .errors import (
    EnumerationBoundError,
    InfeasibleSectorError,
    InvalidArgumentError,
    NumericalFailureError,
)
from .markov import (
    build_matrix,
    class_weight_exponents,
    conjecture_vector,
    stationary,
    verify_conjecture,
)
from .montecarlo import SimulationSpec, simulate_trajectory, sweep_diagram
from .reporting import write_csv, write_json, write_text_atomic
from .theory import (
    dominant_flux_gap,
    limit_check,
    partition_omega,
    partition_sector,
    q_theory,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_INFEASIBLE = 4

DEFAULT_LIMIT_ALPHAS = (0.9, 0.99, 0.999, 0.9999)
DEFAULT_VERIFY_ALPHAS = (0.1, 0.3, 0.5, 0.7, 0.9)


@dataclass(frozen=True)
class CommandSpec:
    """Fully resolved invocation; a run is a pure function of this."""

    command: str
    L: int | None = None
    m1: int | None = None
    m110: int | None = None
    alpha: float = 0.5
    alphas: tuple[float, ...] = ()
    seed: int = 0
    steps: int = 1000
    burn_in: int = 0
    replicates: int = 8
    rule: str = "stoch-v"
    fmt: str = "csv"
    out: str | None = None
    plot: bool = False
    scope: str = "sector"
    omega_id: int | None = None
    tol: float = 1e-8
    init: str | None = None


def _alpha_list(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad alpha list {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("alpha list is empty")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringflux",
        description="Exact and Monte Carlo flux analysis of ring particle systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, sector=True, output=True):
        if sector:
            p.add_argument("--L", type=int, required=True, help="ring length")
            p.add_argument("--m1", type=int, help="particle count")
            p.add_argument("--m110", type=int, help="count of blocks of length >= 2")
        if output:
            p.add_argument("--format", dest="fmt", default="csv",
                           choices=("csv", "json", "txt"))
            p.add_argument("--out", help="output path (default: derived, "
                           "in $RINGFLUX_OUT_DIR or the working directory)")
            p.add_argument("--plot", action="store_true",
                           help="also render a PNG next to the artifact")

    p = sub.add_parser("simulate", help="run one trajectory and dump it")
    common(p)
    p.add_argument("--rule", default="stoch-v", choices=("det", "stoch-u", "stoch-v"))
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--init", help="explicit initial configuration string")

    p = sub.add_parser("sector", help="list the rotation classes of a sector")
    common(p)

    p = sub.add_parser("omega", help="recurrent sets and transient classes")
    common(p)

    p = sub.add_parser("matrix", help="symbolic transition matrix of one recurrent set")
    common(p)
    p.add_argument("--omega-id", type=int, default=0)

    p = sub.add_parser("stationary", help="stationary distribution of one recurrent set")
    common(p)
    p.add_argument("--omega-id", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.5)

    p = sub.add_parser("verify-conjecture",
                       help="compare stationary laws against the product form")
    common(p)
    p.add_argument("--omega-id", type=int, default=None,
                   help="restrict to one recurrent set (default: all)")
    p.add_argument("--alphas", type=_alpha_list,
                   default=DEFAULT_VERIFY_ALPHAS)
    p.add_argument("--tol", type=float, default=1e-8)

    p = sub.add_parser("partition", help="N(k1, k2) counting table")
    common(p)
    p.add_argument("--scope", default="sector", choices=("sector", "omega"))
    p.add_argument("--omega-id", type=int, default=0)

    p = sub.add_parser("flux-theory", help="stationary flux prediction vs density")
    common(p)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--scope", default="sector", choices=("sector", "omega"))
    p.add_argument("--omega-id", type=int, default=0)

    p = sub.add_parser("diagram", help="Monte Carlo fundamental diagram sweep")
    common(p, sector=False)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--m110", type=int, default=None,
                   help="restrict the sweep to one block count")
    p.add_argument("--rule", default="stoch-u", choices=("det", "stoch-u", "stoch-v"))
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--burn-in", type=int, default=0)
    p.add_argument("--replicates", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("limit-check",
                       help="flux convergence toward the deterministic limit")
    common(p)
    p.add_argument("--alphas", type=_alpha_list, default=DEFAULT_LIMIT_ALPHAS)
    p.add_argument("--scope", default="sector", choices=("sector", "omega"))
    p.add_argument("--omega-id", type=int, default=0)

    return parser


def spec_from_args(args: argparse.Namespace) -> CommandSpec:
    fields = {
        key: value
        for key, value in vars(args).items()
        if key in CommandSpec.__dataclass_fields__ and value is not None
    }
    return CommandSpec(**fields)


def _out_path(spec: CommandSpec, default_stem: str) -> Path:
    if spec.out:
        return Path(spec.out)
    suffix = {"csv": ".csv", "json": ".json", "txt": ".txt"}[spec.fmt]
    out_dir = Path(os.environ.get("RINGFLUX_OUT_DIR", "."))
    return out_dir / f"{default_stem}{suffix}"


def _require_sector_args(spec: CommandSpec):
    if spec.m1 is None or spec.m110 is None:
        raise InvalidArgumentError("this command needs --m1 and --m110")


def _sector(spec: CommandSpec):
    _require_sector_args(spec)
    sector = enumerate_sector(spec.L, spec.m1, spec.m110)
    if not sector.classes:
        raise InfeasibleSectorError(
            f"sector ({spec.L}, {spec.m1}, {spec.m110}) has no configurations"
        )
    return sector


def _omega(spec: CommandSpec, index: int) -> OmegaSet:
    decomposition = recurrent_classes(_sector(spec))
    if not 0 <= index < len(decomposition.recurrent):
        raise InvalidArgumentError(
            f"omega id {index} out of range; sector has "
            f"{len(decomposition.recurrent)} recurrent sets"
        )
    return decomposition.recurrent[index]


def _class_row(cls):
    n_tail, n_isolated = class_weight_exponents(cls)
    return str(cls.representative), cls.orbit_size, n_tail, n_isolated


def _class_payload(cls) -> dict:
    config, orbit, n_tail, n_isolated = _class_row(cls)
    return {
        "config": config,
        "orbit_size": orbit,
        "m1110": n_tail,
        "m010": n_isolated,
    }


def _cmd_simulate(spec: CommandSpec) -> tuple[Path, str]:
    sim = SimulationSpec(
        rule=spec.rule,
        L=spec.L,
        alpha=spec.alpha,
        steps=spec.steps,
        seed=spec.seed,
        m1=spec.m1,
        m110=spec.m110,
        init=spec.init,
    )
    configs, moves = simulate_trajectory(sim)
    path = _out_path(spec, f"simulate_{spec.rule}_L{spec.L}")
    if spec.fmt == "txt":
        write_text_atomic(path, "\n".join(configs) + "\n")
    elif spec.fmt == "json":
        write_json(path, {
            "command": "simulate",
            "rule": spec.rule,
            "L": spec.L,
            "alpha": spec.alpha,
            "seed": spec.seed,
            "configs": configs,
            "moves": moves,
        })
    else:
        body = [
            (t, configs[t], moves[t] if t < len(moves) else None,
             moves[t] / spec.L if t < len(moves) else None)
            for t in range(len(configs))
        ]
        write_csv(path, ("step", "config", "moves", "flux"), body)
    if spec.plot:
        from .plotting import save_space_time

        save_space_time(configs, path.with_suffix(".png"),
                        title=f"{spec.rule}, L={spec.L}, alpha={spec.alpha}")
    total_moves = sum(moves)
    mean_flux = total_moves / (len(moves) * spec.L) if moves else 0.0
    return path, f"{len(configs)} states, mean flux {mean_flux:.6g}"


def _cmd_sector(spec: CommandSpec) -> tuple[Path, str]:
    sector = _sector(spec)
    path = _out_path(spec, f"sector_L{spec.L}_m{spec.m1}_b{spec.m110}")
    rows = [_class_row(cls) for cls in sector.classes]
    if spec.fmt == "json":
        write_json(path, {
            "command": "sector",
            "L": sector.L,
            "m1": sector.m1,
            "m110": sector.m110,
            "classes": [_class_payload(cls) for cls in sector.classes],
        })
    else:
        write_csv(path, ("config", "orbit_size", "m1110", "m010"), rows)
    raw_total = sum(cls.orbit_size for cls in sector.classes)
    return path, f"{len(rows)} classes, {raw_total} raw configurations"


def _cmd_omega(spec: CommandSpec) -> tuple[Path, str]:
    decomposition = recurrent_classes(_sector(spec))
    path = _out_path(spec, f"omega_L{spec.L}_m{spec.m1}_b{spec.m110}")
    if spec.fmt == "txt":
        from .reporting import write_text_atomic

        lines = [
            f"# recurrent sets of sector (L={spec.L}, m1={spec.m1}, m110={spec.m110})"
        ]
        for omega in decomposition.recurrent:
            lines.append(f"set {omega.index}: {len(omega.members)} classes")
            lines.extend(str(cls.representative) for cls in omega.members)
            lines.append("")
        if decomposition.transient:
            lines.append(f"transient: {len(decomposition.transient)} classes")
            lines.extend(str(cls.representative) for cls in decomposition.transient)
        else:
            lines.append("transient: none")
        write_text_atomic(path, "\n".join(lines) + "\n")
    elif spec.fmt == "json":
        write_json(path, {
            "command": "omega",
            "L": spec.L,
            "m1": spec.m1,
            "m110": spec.m110,
            "recurrent": [
                {
                    "index": omega.index,
                    "members": [_class_payload(cls) for cls in omega.members],
                }
                for omega in decomposition.recurrent
            ],
            "transient": [
                _class_payload(cls) for cls in decomposition.transient
            ],
        })
    else:
        rows = []
        for omega in decomposition.recurrent:
            rows.extend(
                (omega.index, *_class_row(cls)) for cls in omega.members
            )
        rows.extend((-1, *_class_row(cls)) for cls in decomposition.transient)
        write_csv(path, ("set_id", "config", "orbit_size", "m1110", "m010"), rows)
    sizes = ", ".join(str(len(o.members)) for o in decomposition.recurrent)
    return path, (
        f"{len(decomposition.recurrent)} recurrent sets (sizes {sizes}), "
        f"{len(decomposition.transient)} transient classes"
    )


def _cmd_matrix(spec: CommandSpec) -> tuple[Path, str]:
    omega = _omega(spec, spec.omega_id or 0)
    matrix = build_matrix(omega)
    members = [str(cls.representative) for cls in omega.members]
    path = _out_path(spec, f"matrix_L{spec.L}_m{spec.m1}_b{spec.m110}_w{omega.index}")
    if spec.fmt == "json":
        write_json(path, {
            "command": "matrix",
            "L": spec.L,
            "m1": spec.m1,
            "m110": spec.m110,
            "omega_id": omega.index,
            "members": members,
            "entries": [[str(entry) for entry in row] for row in matrix.entries],
        })
    else:
        rows = []
        for i, row in enumerate(matrix.entries):
            for j, entry in enumerate(row):
                if entry:
                    rows.append((members[i], members[j], str(entry)))
        write_csv(path, ("from_config", "to_config", "probability"), rows)
    return path, f"{matrix.size}x{matrix.size} matrix, rows sum to one"


def _cmd_stationary(spec: CommandSpec) -> tuple[Path, str]:
    omega = _omega(spec, spec.omega_id or 0)
    matrix = build_matrix(omega)
    distribution = stationary(matrix, spec.alpha)
    candidate = conjecture_vector(omega, spec.alpha)
    path = _out_path(
        spec, f"stationary_L{spec.L}_m{spec.m1}_b{spec.m110}_w{omega.index}"
    )
    rows = [
        (
            str(cls.representative),
            spec.alpha,
            probability,
            float(expected),
            abs(probability - expected) / expected,
        )
        for cls, probability, expected in zip(
            omega.members, distribution.probabilities, candidate
        )
    ]
    if spec.fmt == "json":
        write_json(path, {
            "command": "stationary",
            "L": spec.L,
            "m1": spec.m1,
            "m110": spec.m110,
            "omega_id": omega.index,
            "alpha": spec.alpha,
            "residual": distribution.residual,
            "classes": [
                {
                    "config": row[0],
                    "probability": row[2],
                    "product_form": row[3],
                    "rel_error": row[4],
                }
                for row in rows
            ],
        })
    else:
        write_csv(
            path,
            ("config", "alpha", "probability", "product_form", "rel_error"),
            rows,
        )
    worst = max(row[4] for row in rows)
    return path, (
        f"{matrix.size} classes, residual {distribution.residual:.2e}, "
        f"max deviation from product form {worst:.2e}"
    )


def _cmd_verify_conjecture(spec: CommandSpec) -> tuple[Path, str]:
    decomposition = recurrent_classes(_sector(spec))
    if spec.omega_id is None:
        omegas = decomposition.recurrent
    else:
        omegas = (_omega(spec, spec.omega_id),)
    alphas = spec.alphas or DEFAULT_VERIFY_ALPHAS
    rows = []
    all_passed = True
    for omega in omegas:
        report = verify_conjecture(omega, alphas, spec.tol)
        all_passed &= report.passed
        for alpha in alphas:
            rows.append(
                (
                    omega.index,
                    alpha,
                    len(omega.members),
                    report.max_relative_error[alpha],
                    spec.tol,
                    report.passed,
                )
            )
    path = _out_path(spec, f"verify_L{spec.L}_m{spec.m1}_b{spec.m110}")
    columns = ("set_id", "alpha", "classes", "max_rel_error", "tol", "passed")
    if spec.fmt == "json":
        write_json(path, {
            "command": "verify-conjecture",
            "L": spec.L,
            "m1": spec.m1,
            "m110": spec.m110,
            "rows": [dict(zip(columns, row)) for row in rows],
            "passed": all_passed,
        })
    else:
        write_csv(path, columns, rows)
    verdict = "PASS" if all_passed else "FAIL"
    worst = max(row[3] for row in rows)
    return path, f"{verdict}: {len(omegas)} sets, worst deviation {worst:.2e}"


def _partition_table(spec: CommandSpec):
    _require_sector_args(spec)
    if spec.scope == "omega":
        return partition_omega(_omega(spec, spec.omega_id or 0))
    if not sector_is_feasible(spec.L, spec.m1, spec.m110):
        raise InfeasibleSectorError(
            f"sector ({spec.L}, {spec.m1}, {spec.m110}) has no configurations"
        )
    return partition_sector(spec.L, spec.m1, spec.m110)


def _cmd_partition(spec: CommandSpec) -> tuple[Path, str]:
    table = _partition_table(spec)
    path = _out_path(
        spec, f"partition_{table.scope}_L{spec.L}_m{spec.m1}_b{spec.m110}"
    )
    if spec.fmt == "json":
        write_json(path, {
            "command": "partition",
            "L": table.L,
            "m1": table.m1,
            "m110": table.m110,
            "scope": table.scope,
            "kmax": table.kmax,
            "counts": [
                {"k1": k1, "k2": k2, "count": str(count)}
                for (k1, k2), count in table.counts
            ],
        })
    else:
        write_csv(
            path,
            ("k1", "k2", "count"),
            [(k1, k2, count) for (k1, k2), count in table.counts],
        )
    return path, (
        f"{len(table.counts)} occupied cells, kmax={table.kmax}, "
        f"total {table.total()}"
    )


def _cmd_flux_theory(spec: CommandSpec) -> tuple[Path, str]:
    if spec.m110 is None:
        raise InvalidArgumentError("flux-theory needs --m110")
    if spec.m1 is not None:
        m1_values = [spec.m1]
    else:
        m1_values = [
            m1
            for m1 in range(2 * spec.m110, spec.L - spec.m110 + 1)
            if sector_is_feasible(spec.L, m1, spec.m110)
        ]
    points = []
    for m1 in m1_values:
        if spec.scope == "omega":
            table = partition_omega(_omega(replace(spec, m1=m1), spec.omega_id or 0))
        else:
            table = partition_sector(spec.L, m1, spec.m110)
        points.append(q_theory(table, spec.alpha))
    path = _out_path(
        spec, f"flux_{spec.scope}_L{spec.L}_b{spec.m110}_a{spec.alpha}"
    )
    rows = [
        (p.L, p.m1, p.m110, p.alpha, float(p.q_v), float(p.q_u)) for p in points
    ]
    columns = ("L", "m1", "m110", "alpha", "Q_v", "Q_u")
    if spec.fmt == "json":
        write_json(path, {
            "command": "flux-theory",
            "scope": spec.scope,
            "rows": [dict(zip(columns, row)) for row in rows],
        })
    else:
        write_csv(path, columns, rows)
    if spec.plot:
        from .plotting import save_flux_curve

        save_flux_curve(points, path.with_suffix(".png"),
                        title=f"L={spec.L}, m110={spec.m110}, alpha={spec.alpha}")
    return path, f"{len(rows)} density points at alpha={spec.alpha}"


def _cmd_diagram(spec: CommandSpec) -> tuple[Path, str]:
    rows = sweep_diagram(
        spec.L,
        spec.alpha,
        rule=spec.rule,
        steps=spec.steps,
        burn_in=spec.burn_in,
        replicates=spec.replicates,
        seed=spec.seed,
        m110_values=None if spec.m110 is None else (spec.m110,),
    )
    skipped = [row for row in rows if not row.feasible]
    for row in skipped:
        print(
            f"warning: sector ({row.L}, {row.m1}, {row.m110}) is empty; skipped",
            file=sys.stderr,
        )
    stem = f"diagram_{spec.rule}_L{spec.L}_a{spec.alpha}"
    if spec.m110 is not None:
        stem += f"_b{spec.m110}"
    path = _out_path(spec, stem)
    columns = (
        "L", "m1", "m110", "alpha", "rho1", "rho110",
        "Q_u_hat", "stderr", "n_max", "n_burn", "replicates", "seed",
    )
    table = [
        (
            row.L, row.m1, row.m110, row.alpha, row.rho1, row.rho110,
            row.q_u_hat, row.stderr, row.n_max, row.n_burn,
            row.replicates, row.seed,
        )
        for row in rows
    ]
    if spec.fmt == "json":
        write_json(path, {
            "command": "diagram",
            "rows": [dict(zip(columns, row)) for row in table],
        })
    else:
        write_csv(path, columns, table)
    if spec.plot:
        from .plotting import save_diagram_surface

        save_diagram_surface(rows, path.with_suffix(".png"),
                             title=f"{spec.rule}, L={spec.L}, alpha={spec.alpha}")
    measured = sum(1 for row in rows if row.q_u_hat is not None)
    return path, f"{measured} grid points measured, {len(skipped)} empty skipped"


def _cmd_limit_check(spec: CommandSpec) -> tuple[Path, str]:
    _require_sector_args(spec)
    alphas = spec.alphas or DEFAULT_LIMIT_ALPHAS
    if spec.scope == "omega":
        table = partition_omega(_omega(spec, spec.omega_id or 0))
    else:
        if not sector_is_feasible(spec.L, spec.m1, spec.m110):
            raise InfeasibleSectorError(
                f"sector ({spec.L}, {spec.m1}, {spec.m110}) has no configurations"
            )
        table = partition_sector(spec.L, spec.m1, spec.m110)
    report = limit_check(spec.L, spec.m1, spec.m110, alphas, table=table)
    path = _out_path(spec, f"limit_L{spec.L}_m{spec.m1}_b{spec.m110}")
    columns = ("alpha", "Q_v", "flux_gap", "deterministic_flux", "deviation")
    rows = [
        (row.alpha, row.q_v, row.flux_gap, row.deterministic_flux, row.deviation)
        for row in report.rows
    ]
    if spec.fmt == "json":
        write_json(path, {
            "command": "limit-check",
            "L": spec.L,
            "m1": spec.m1,
            "m110": spec.m110,
            "scope": report.scope,
            "rows": [dict(zip(columns, row)) for row in rows],
            "exact_limit_gap": str(report.exact_limit_gap),
        })
    else:
        write_csv(path, columns, rows)
    if spec.plot:
        from .plotting import save_limit_curve

        save_limit_curve(report, path.with_suffix(".png"),
                         title=f"L={spec.L}, m1={spec.m1}, m110={spec.m110}")
    final = report.rows[-1]
    return path, (
        f"deviation {final.deviation:.3e} at alpha={final.alpha}; "
        f"exact limit gap {report.exact_limit_gap}"
    )


_HANDLERS = {
    "simulate": _cmd_simulate,
    "sector": _cmd_sector,
    "omega": _cmd_omega,
    "matrix": _cmd_matrix,
    "stationary": _cmd_stationary,
    "verify-conjecture": _cmd_verify_conjecture,
    "partition": _cmd_partition,
    "flux-theory": _cmd_flux_theory,
    "diagram": _cmd_diagram,
    "limit-check": _cmd_limit_check,
}


def dispatch(spec: CommandSpec) -> int:
    path, summary = _HANDLERS[spec.command](spec)
    print(f"{spec.command}: wrote {path}; {summary}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = spec_from_args(args)
        return dispatch(spec)
    except (InvalidArgumentError, EnumerationBoundError) as error:
        print(f"error: invalid-argument: {error}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleSectorError as error:
        print(f"error: infeasible-sector: {error}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NumericalFailureError as error:
        print(f"error: numerical-failure: {error}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as error:
        print(f"error: io: {error}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())

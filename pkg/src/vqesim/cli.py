"""Command-line surface: map, gates, vqe, exact, calibrate, mitigate, profile.

Exit codes: 0 success, 1 validation/usage error, 2 I/O error.  Defaults
mirror the reference workflow: depth 1, 8192 shots, 500 SPSA iterations,
CG on the exact backend and SPSA on sampled backends.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, io
from .ansatz import ANSATZ_KINDS, build_ansatz, hartree_fock_bits_for, resource_counts
from .backends import NoiseModel
from .errors import ValidationError, VqesimError
from .exact import ground_state, sector_ground
from .fermion import (
    ActiveSpace,
    FermionSystem,
    build_hamiltonian,
    canonical_mapping,
    parse_fcidump,
    reduce_active_space,
    to_qubit_hamiltonian,
)
from .mitigation import (
    COMPLETE,
    LEAST_SQUARES,
    PSEUDO_INVERSE,
    TENSORED,
    backend_executor,
    analytic_executor,
    build_calibration,
    mitigate,
)
from .vqe import (
    BackendConfig,
    CgConfig,
    SpsaConfig,
    cg_minimize,
    evaluate_energy,
    gradient,
    make_objective,
    report_final,
    spsa_minimize,
)

KCAL_PER_MHA = 0.6275095


@dataclass
class ProfilePoint:
    label: str
    energy: float
    uncertainty: float
    relative_mha: float
    relative_kcal: float
    relative_uncertainty: float


@dataclass
class ProfileReport:
    points: list[ProfilePoint]

    def table(self) -> str:
        width = max(8, *(len(p.label) for p in self.points))
        lines = [
            f"{'label':<{width}}  {'energy_ha':>14}  {'u_ha':>10}  "
            f"{'rel_mha':>8}  {'rel_kcal_mol':>12}  {'rel_u_mha':>9}"
        ]
        for p in self.points:
            lines.append(
                f"{p.label:<{width}}  {p.energy:>14.7f}  {p.uncertainty:>10.6f}  "
                f"{p.relative_mha:>8.1f}  {p.relative_kcal:>12.1f}  "
                f"{p.relative_uncertainty:>9.1f}"
            )
        return "\n".join(lines) + "\n"

    def plot_columns(self) -> str:
        """Reaction-coordinate / relative-energy columns for external plotting."""
        lines = ["# index label relative_mha relative_kcal_mol"]
        for i, p in enumerate(self.points):
            lines.append(f"{i} {p.label} {p.relative_mha:.1f} {p.relative_kcal:.1f}")
        return "\n".join(lines) + "\n"


def profile_report(points) -> ProfileReport:
    """Relative-energy table against the first (reference) point.

    Relative energies are reported in millihartree and kcal/mol at one
    decimal place; uncertainties combine in quadrature.
    """
    points = list(points)
    if len(points) < 2:
        raise ValidationError("profile needs at least 2 points")
    ref_label, ref_energy, ref_u = points[0]
    out = []
    for i, (label, energy, u) in enumerate(points):
        rel_mha = (energy - ref_energy) * 1000.0
        rel_u = 0.0 if i == 0 else float(np.hypot(u, ref_u)) * 1000.0
        out.append(
            ProfilePoint(
                label=label,
                energy=float(energy),
                uncertainty=float(u),
                relative_mha=rel_mha,
                relative_kcal=rel_mha * KCAL_PER_MHA,
                relative_uncertainty=rel_u,
            )
        )
    return ProfileReport(out)


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # single-line diagnostic, exit 1
        self.exit(1, f"error: {message}\n")


def _default_seed(value):
    if value is not None:
        return value
    env = os.environ.get("VQESIM_SEED")
    return int(env) if env else None


def _load_noise(path) -> NoiseModel | None:
    return io.read_noise(path) if path else None


def _system_from_args(args, payload_system) -> FermionSystem | None:
    override = [args.spin_orbitals, args.n_alpha, args.n_beta]
    if any(v is not None for v in override):
        if any(v is None for v in override):
            raise ValidationError(
                "--spin-orbitals, --n-alpha and --n-beta must be given together"
            )
        return FermionSystem(
            n_spin_orbitals=args.spin_orbitals,
            n_alpha=args.n_alpha,
            n_beta=args.n_beta,
            mapping=args.mapping or "parity",
            two_qubit_reduction=args.two_qubit_reduction,
        )
    return payload_system


def _parse_orbital_list(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(tok) for tok in text.split(",") if tok != "")
    except ValueError:
        raise ValidationError(f"bad orbital list {text!r}") from None


# ---------------------------------------------------------------------------
# Subcommands


def _cmd_map(args) -> int:
    text = Path(args.fcidump).read_text()
    integrals = parse_fcidump(text)
    frozen = _parse_orbital_list(args.frozen)
    active = _parse_orbital_list(args.active) or tuple(
        i for i in range(integrals.norb) if i not in frozen
    )
    active_electrons = integrals.nelec - 2 * len(frozen)
    n_alpha = (active_electrons + integrals.ms2) // 2
    n_beta = (active_electrons - integrals.ms2) // 2
    space = ActiveSpace(frozen=frozen, active=active, n_alpha=n_alpha, n_beta=n_beta)
    h1, g2, core = reduce_active_space(integrals, space)
    mapping = canonical_mapping(args.mapping or "parity")
    system = FermionSystem(
        n_spin_orbitals=2 * len(active),
        n_alpha=n_alpha,
        n_beta=n_beta,
        mapping=mapping,
        two_qubit_reduction=args.two_qubit_reduction,
    )
    fermion_op = build_hamiltonian(h1, g2, core)
    h = to_qubit_hamiltonian(
        fermion_op, system.n_spin_orbitals, system.mapping, system.taper
    )
    manifest = io.build_manifest(
        "map",
        {"fcidump": args.fcidump},
        {
            "frozen": list(frozen),
            "active": list(active),
            "mapping": mapping,
            "two_qubit_reduction": args.two_qubit_reduction,
        },
    )
    io.write_hamiltonian(args.output, h, system=system, manifest=manifest)
    print(f"qubits={h.num_qubits} terms={h.num_terms} constant={h.constant:.10f}")
    return 0


def _cmd_gates(args) -> int:
    system = None
    if args.ansatz == "uccsd" and args.spin_orbitals is not None:
        system = FermionSystem(
            n_spin_orbitals=args.spin_orbitals,
            n_alpha=args.n_alpha or 0,
            n_beta=args.n_beta or 0,
            mapping=args.mapping or "parity",
            two_qubit_reduction=args.two_qubit_reduction,
        )
    cnots, params = resource_counts(args.ansatz, args.qubits, args.depth, system)
    print(f"cnots={cnots} params={params}")
    return 0


def _make_backend_config(args, seed) -> tuple[BackendConfig, dict]:
    noise = _load_noise(args.noise)
    mitigation = None
    mitigation_desc = "none"
    if args.mitigation != "none":
        if args.backend != "sampled":
            raise ValidationError("mitigation applies to the sampled backend only")
        executor = backend_executor(noise, seed=None if seed is None else seed + 7919)
        mitigation = build_calibration(
            args.num_qubits_for_mitigation, executor, args.shots, args.mitigation
        )
        mitigation_desc = f"{args.mitigation}/{args.mitigation_method}"
    cfg = BackendConfig(
        kind="exact" if args.backend == "exact" else "sampled",
        shots=args.shots,
        seed=seed,
        noise=noise,
        mitigation=mitigation,
        mitigation_method=args.mitigation_method,
        group_terms=args.group_terms,
    )
    return cfg, {"mitigation": mitigation_desc}


def _cmd_vqe(args) -> int:
    h, system = io.read_hamiltonian(args.hamiltonian)
    system = _system_from_args(args, system)
    seed = _default_seed(args.seed)
    if seed is None and args.backend == "sampled":
        seed = int(np.random.SeedSequence().generate_state(1)[0])
    if system is not None and system.num_qubits != h.num_qubits:
        raise ValidationError(
            f"system encodes {system.num_qubits} qubits but Hamiltonian has "
            f"{h.num_qubits}"
        )
    hf_bits = hartree_fock_bits_for(system) if system is not None else None
    template = build_ansatz(args.ansatz, h.num_qubits, args.depth, hf_bits, system)

    args.num_qubits_for_mitigation = h.num_qubits
    optimizer = args.optimizer or ("cg" if args.backend == "exact" else "spsa")
    if optimizer == "cg" and args.backend != "exact":
        raise ValidationError("cg requires the exact backend")
    cfg, extra_desc = _make_backend_config(args, seed)

    theta0 = np.zeros(template.num_parameters)
    if args.init == "perturbed":
        init_rng = np.random.default_rng(
            None if seed is None else np.random.SeedSequence([seed, 2])
        )
        theta0 = init_rng.uniform(-args.init_scale, args.init_scale, template.num_parameters)

    objective = make_objective(template, h, cfg)
    backend_desc = {**cfg.describe(), **extra_desc, "hamiltonian": io.hamiltonian_digest(h)}
    if optimizer == "spsa":
        spsa_a = args.spsa_a
        if spsa_a is None:
            # keep the first-step magnitude when a stabilization constant is set
            base = SpsaConfig()
            spsa_a = base.a * (1.0 + args.spsa_stability) ** base.alpha
        spsa_cfg = SpsaConfig(
            iterations=args.iterations,
            seed=seed,
            a=spsa_a,
            c=args.spsa_c,
            A=args.spsa_stability,
            calibrate_a=args.spsa_calibrate,
        )
        trace = spsa_minimize(objective, theta0, spsa_cfg, backend_desc)
        final = report_final(trace, window=args.report_window, span=args.report_span)
        energy, uncertainty = final.energy, final.uncertainty
        window_start = final.window_start
    else:
        grad_fn = lambda th: gradient(th, template, h, method=args.gradient)
        trace = cg_minimize(objective, grad_fn, theta0, CgConfig(), backend_desc)
        energy = trace.records[-1].sample.energy
        uncertainty = 0.0
        window_start = trace.records[-1].iteration

    manifest = io.build_manifest(
        "vqe",
        {"hamiltonian": args.hamiltonian},
        {
            "ansatz": args.ansatz,
            "depth": args.depth,
            "optimizer": optimizer,
            "backend": cfg.describe(),
            "init": args.init,
            "seed": seed,
            "trace_optimizer": trace.optimizer,
        },
    )
    label = args.label or Path(args.output).stem
    io.write_trace(f"{args.output}.trace.json", trace, manifest)
    io.write_result(
        f"{args.output}.report.json",
        label=label,
        energy=energy,
        uncertainty=uncertainty,
        optimizer=optimizer,
        manifest=manifest,
        extra={"window_start": window_start, "iterations": len(trace)},
    )
    print(
        f"energy={energy:.10f} uncertainty={uncertainty:.10f} "
        f"iterations={len(trace)} window_start={window_start}"
    )
    return 0


def _cmd_exact(args) -> int:
    h, system = io.read_hamiltonian(args.hamiltonian)
    if args.sector:
        if system is None:
            raise ValidationError("--sector needs a Hamiltonian file with a system block")
        try:
            n_target, sz_target = (float(tok) for tok in args.sector.split(","))
        except ValueError:
            raise ValidationError(f"bad --sector {args.sector!r}; expected N,SZ") from None
        energy = sector_ground(
            h, n_target, sz_target, system.n_spin_orbitals, system.mapping, system.taper
        )
    else:
        energy = ground_state(h).ground_energy
    manifest = io.build_manifest(
        "exact", {"hamiltonian": args.hamiltonian}, {"sector": args.sector}
    )
    label = args.label or Path(args.output).stem
    io.write_result(
        args.output, label=label, energy=float(energy), uncertainty=0.0,
        optimizer="exact", manifest=manifest,
    )
    print(f"energy={energy:.10f}")
    return 0


def _cmd_calibrate(args) -> int:
    noise = _load_noise(args.noise)
    seed = _default_seed(args.seed)
    if args.analytic:
        executor = analytic_executor(noise)
    else:
        executor = backend_executor(noise, seed=seed)
    cal = build_calibration(args.qubits, executor, args.shots, args.method)
    manifest = io.build_manifest(
        "calibrate",
        {"noise": args.noise} if args.noise else {},
        {
            "qubits": args.qubits, "shots": args.shots, "method": args.method,
            "seed": seed, "analytic": args.analytic,
        },
    )
    io.write_calibration(args.output, cal, manifest)
    print(f"qubits={cal.n_qubits} method={cal.method} shots={cal.shots}")
    return 0


def _cmd_mitigate(args) -> int:
    counts = io.read_counts(args.counts)
    cal = io.read_calibration(args.calibration)
    quasi = mitigate(counts, cal, args.method)
    manifest = io.build_manifest(
        "mitigate",
        {"counts": args.counts, "calibration": args.calibration},
        {"method": args.method},
    )
    io.write_quasi(args.output, quasi, manifest)
    total = sum(quasi.values.values())
    print(f"shots={quasi.shots} total={total:.6f} warning={quasi.warning}")
    return 0


def _cmd_profile(args) -> int:
    labels = args.labels.split(",") if args.labels else None
    if labels is not None and len(labels) != len(args.results):
        raise ValidationError("--labels count must match the number of result files")
    points = []
    for i, path in enumerate(args.results):
        payload = io.read_result(path)
        label = labels[i] if labels else payload["label"]
        points.append((label, payload["energy"], payload["uncertainty"]))
    report = profile_report(points)
    sys.stdout.write(report.table())
    if args.output:
        io.write_json(
            args.output,
            {
                "schema": io.SCHEMA_PROFILE,
                "points": [
                    {
                        "label": p.label,
                        "energy": p.energy,
                        "uncertainty": p.uncertainty,
                        "relative_mha": p.relative_mha,
                        "relative_kcal_mol": p.relative_kcal,
                        "relative_uncertainty_mha": p.relative_uncertainty,
                    }
                    for p in report.points
                ],
            },
        )
    if args.plot_data:
        Path(args.plot_data).write_text(report.plot_columns())
    return 0


# ---------------------------------------------------------------------------
# Parser assembly


def _add_system_flags(parser) -> None:
    parser.add_argument("--spin-orbitals", type=int, help="active spin-orbital count")
    parser.add_argument("--n-alpha", type=int, help="active alpha electrons")
    parser.add_argument("--n-beta", type=int, help="active beta electrons")
    parser.add_argument("--mapping", choices=["jordan-wigner", "jw", "parity"])
    parser.add_argument(
        "--two-qubit-reduction", action="store_true",
        help="drop the two parity-symmetry qubits (parity mapping only)",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="vqesim", description=__doc__)
    parser.add_argument("--version", action="version", version=f"vqesim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("map", help="FCIDUMP -> qubit Hamiltonian file")
    p.add_argument("--fcidump", required=True)
    p.add_argument("--active", help="comma-separated active spatial orbitals")
    p.add_argument("--frozen", help="comma-separated frozen spatial orbitals")
    p.add_argument("--mapping", choices=["jordan-wigner", "jw", "parity"], default="parity")
    p.add_argument("--two-qubit-reduction", action="store_true")
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=_cmd_map)

    p = sub.add_parser("gates", help="ansatz resource counts")
    p.add_argument("--ansatz", choices=list(ANSATZ_KINDS), required=True)
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--depth", type=int, default=1)
    _add_system_flags(p)
    p.set_defaults(func=_cmd_gates)

    p = sub.add_parser("vqe", help="variational ground-state search")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--ansatz", choices=list(ANSATZ_KINDS), default="ry")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--optimizer", choices=["cg", "spsa"])
    p.add_argument("--backend", choices=["exact", "sampled"], default="exact")
    p.add_argument("--shots", type=int, default=8192)
    p.add_argument("--iterations", type=int, default=500)
    p.add_argument("--seed", type=int)
    p.add_argument("--noise", help="noise model file")
    p.add_argument(
        "--mitigation", choices=["none", COMPLETE, TENSORED], default="none"
    )
    p.add_argument(
        "--mitigation-method", choices=[LEAST_SQUARES, PSEUDO_INVERSE],
        default=LEAST_SQUARES,
    )
    p.add_argument("--group-terms", action="store_true")
    p.add_argument("--init", choices=["zeros", "perturbed"], default="zeros")
    p.add_argument("--init-scale", type=float, default=0.1)
    p.add_argument("--gradient", choices=["parameter_shift", "central_diff"],
                   default="parameter_shift")
    p.add_argument("--spsa-a", type=float, help="override the SPSA a gain")
    p.add_argument("--spsa-c", type=float, default=0.1)
    p.add_argument(
        "--spsa-stability", type=float, default=0.0,
        help="SPSA stabilization constant A (a is rescaled to keep the first step)",
    )
    p.add_argument("--spsa-calibrate", action="store_true",
                   help="calibrate a from 25 probe pairs")
    p.add_argument("--report-window", type=int, default=10)
    p.add_argument("--report-span", type=int, default=100)
    p.add_argument("--label")
    p.add_argument("--output", "-o", required=True,
                   help="prefix for <prefix>.trace.json and <prefix>.report.json")
    _add_system_flags(p)
    p.set_defaults(func=_cmd_vqe)

    p = sub.add_parser("exact", help="dense exact ground state")
    p.add_argument("--hamiltonian", required=True)
    p.add_argument("--sector", help="N,SZ symmetry-sector targets")
    p.add_argument("--label")
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=_cmd_exact)

    p = sub.add_parser("calibrate", help="build a measurement calibration matrix")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--noise", help="noise model file")
    p.add_argument("--shots", type=int, default=8192)
    p.add_argument("--seed", type=int)
    p.add_argument("--method", choices=[COMPLETE, TENSORED], default=COMPLETE)
    p.add_argument("--analytic", action="store_true",
                   help="use exact post-noise distributions instead of sampling")
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("mitigate", help="correct a counts file")
    p.add_argument("--counts", required=True)
    p.add_argument("--calibration", required=True)
    p.add_argument("--method", choices=[LEAST_SQUARES, PSEUDO_INVERSE],
                   default=LEAST_SQUARES)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=_cmd_mitigate)

    p = sub.add_parser("profile", help="relative-energy table from result files")
    p.add_argument("results", nargs="+")
    p.add_argument("--labels", help="comma-separated label overrides")
    p.add_argument("--output", "-o")
    p.add_argument("--plot-data", help="write plot-ready columns to this file")
    p.set_defaults(func=_cmd_profile)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VqesimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Named verification checks runnable on the built-in examples.

Each check measures a worst-case defect of an identity over seeded
samples and passes when the defect stays under the configured tolerance
(the signature table instead counts mismatched sign patterns).  The CLI
composes these into reports; the vocabulary lives in CHECKS and
applicability is decided per bundle by `applicable_checks`.
"""

from dataclasses import dataclass

import numpy as np

from .atlas import coherence_defect, transform_connection
from .connections import (AnisotropicConnection, NonlinearConnection, Spray,
                          berwald_connection, canonical_spray,
                          chern_connection, geodesic_integrate,
                          landsberg_tensor, nonlinear_residue,
                          raise_connection, torsion)
from .errors import LevelError
from .fields import (DiffEngine, TensorField, add, constant_field,
                     homogeneity_defect, liouville_contract, scalar_power,
                     scale, tensor_product, zero_field)
from .functionals import (ActionFunctional, evaluate_action,
                          extend_functional, gauge_symmetrize,
                          restrict_functional)
from .ladder import decompose, destroy_residues, reconstruct
from .linear import (classical_linear, induced_nonlinear,
                     is_strongly_regular, project_intrinsic)
from .metrics import (lagrangian_of_metric, legendre_of, legendre_residue,
                      signature_at)

_ANALYTIC = DiffEngine("analytic")


@dataclass
class CheckReport:
    check: str
    max_abs_defect: float
    samples_used: int
    passed: bool
    worst_sample: dict | None

    def as_dict(self):
        return {
            "check": self.check,
            "max_abs_defect": float(self.max_abs_defect),
            "pass": bool(self.passed),
            "samples_used": int(self.samples_used),
            "worst_sample": self.worst_sample,
        }


class _Worst:
    def __init__(self):
        self.value = 0.0
        self.sample = None

    def feed(self, defect, x, y):
        defect = float(defect)
        if self.sample is None or defect > self.value:
            self.value = defect
            self.sample = {"x": np.asarray(x).tolist(),
                           "y": np.asarray(y).tolist()}


def _report(name, worst, count, tol):
    return CheckReport(name, worst.value, count, worst.value < tol,
                       worst.sample)


def _engine(config):
    return DiffEngine(config.method, config.step_scale)


def euclidean_energy_field(domain):
    """<y, y> with its full chain, on any domain; handy shift ingredient."""
    ddell = constant_field(domain, 2.0 * np.eye(domain.dim), 0, 2)
    ell = TensorField(domain, 0, 1, 1.0, lambda x, y: 2.0 * y, dy=ddell,
                      dx=lambda: zero_field(domain, 0, 2, 1.0), name="2y")
    return TensorField(domain, 0, 0, 2.0, lambda x, y: float(y @ y), dy=ell,
                       dx=lambda: zero_field(domain, 0, 1, 2.0), name="<y,y>")


def kernel_shift(domain, coeffs, rank=2):
    """An exactly in-kernel shift of covariant rank 1 or 2 at the matching
    connection-ladder homogeneity (2 - rank), from constant seed coefficients.

    Starts from W = (c . y) scaled to the right homogeneity by a power of
    |y| (full analytic chain, so the kernel projection is exact) and strips
    the derivative-image part.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    W = liouville_contract(
        constant_field(domain, coeffs, 1, coeffs.ndim - 1, name="c"))
    if rank == 2:
        W = tensor_product(W, scalar_power(euclidean_energy_field(domain), -0.5),
                           "ijk,->ijk", 1, 2, name="shift_raw")
    elif rank != 1:
        raise LevelError(f"kernel shifts come in ranks 1 and 2, not {rank}")
    split = decompose(W, round(W.alpha) + 1, _ANALYTIC)
    return split.residues[-1]


def check_euler(bundle, config):
    """Euler defect dv(T) . y - alpha T, relative, over every bundle field."""
    engine = _engine(config)
    xs, ys = bundle.domain.sample(config.samples, config.seed)
    worst = _Worst()
    for field in bundle.fields.values():
        for x, y in zip(xs, ys):
            defect = homogeneity_defect(field, x, y, engine)
            ref = 1.0 + float(np.max(np.abs(field(x, y))))
            worst.feed(np.max(np.abs(defect)) / ref, x, y)
    return _report("euler", worst, len(xs), config.tolerance)


def check_ladder_roundtrip(bundle, config):
    """Ground-floor split and reassembly of the bundle's metric objects."""
    engine = _engine(config)
    xs, ys = bundle.domain.sample(config.samples, config.seed)
    worst = _Worst()
    targets = []
    if bundle.lagrangian is not None:
        targets.append(bundle.lagrangian.ell_field())
        targets.append(bundle.lagrangian.phi_field())
    if bundle.metric is not None:
        targets.append(bundle.metric.field)
    for field in targets:
        split = decompose(field, round(field.alpha) + field.s, engine)
        rebuilt = reconstruct(split, engine)
        kernels = [liouville_contract(res) for res in split.residues]
        for x, y in zip(xs, ys):
            worst.feed(np.max(np.abs(rebuilt(x, y) - field(x, y))), x, y)
            for hooked in kernels:
                worst.feed(np.max(np.abs(hooked(x, y))), x, y)
    return _report("ladder_roundtrip", worst, len(xs), config.tolerance)


def check_legendre_residue(bundle, config):
    """The gradient of an energy has no Legendre-type residue."""
    engine = _engine(config)
    xs, ys = bundle.domain.sample(config.samples, config.seed)
    res = legendre_residue(legendre_of(bundle.lagrangian), engine)
    worst = _Worst()
    for x, y in zip(xs, ys):
        worst.feed(np.max(np.abs(res(x, y))), x, y)
    return _report("legendre_residue", worst, len(xs), config.tolerance)


def check_wick_identity(bundle, config):
    """Hooking y into a wick metric scales the base by 1 + kappa; destroying
    its residues recovers (1 + kappa) phi; its energy is (1 + kappa) L / 2."""
    engine = _engine(config)
    xs, ys = bundle.domain.sample(config.samples, config.seed)
    kappa = bundle.kappa
    g = bundle.metric.field
    phi = bundle.lagrangian.phi_field()
    L = bundle.lagrangian.field
    hooked = liouville_contract(g)
    destroyed = destroy_residues(g, engine=engine)
    energy = lagrangian_of_metric(bundle.metric).field
    worst = _Worst()
    for x, y in zip(xs, ys):
        target = (1.0 + kappa) * phi(x, y)
        worst.feed(np.max(np.abs(hooked(x, y) - target @ y)), x, y)
        worst.feed(np.max(np.abs(destroyed(x, y) - target)), x, y)
        worst.feed(abs(float(energy(x, y))
                       - (1.0 + kappa) * float(L(x, y)) / 2.0), x, y)
    return _report("wick_identity", worst, len(xs), config.tolerance)


def check_signature_table(bundle, config):
    """Eigenvalue signs of the wick metric follow the kappa thresholds.

    The defect is the number of samples whose signature disagrees with the
    prediction, so the check passes only with zero mismatches.
    """
    xs, ys = bundle.domain.sample(config.samples, config.seed)
    kappa = bundle.kappa
    p, m, z = signature_at(bundle.lagrangian.phi_field(), xs[0], ys[0])
    if kappa > -1.0:
        expected = (p, m, z)
    elif kappa == -1.0:
        expected = (p - 1, m, z + 1)
    else:
        expected = (p - 1, m + 1, z)
    worst = _Worst()
    worst.feed(0.0, xs[0], ys[0])
    mismatches = 0
    for x, y in zip(xs, ys):
        if signature_at(bundle.metric, x, y) != expected:
            mismatches += 1
            worst.feed(float(mismatches), x, y)
    return _report("signature_table", worst, len(xs), 1.0)


def check_canonical_spray_oracle(bundle, config):
    """Canonical spray against its closed form (zero for x-independent
    energies)."""
    engine = _engine(config)
    xs, ys = bundle.domain.sample(config.samples, config.seed)
    spray = canonical_spray(bundle.lagrangian, engine)
    oracle = bundle.spray_oracle
    if oracle is None:
        oracle = lambda x, y: np.zeros(bundle.domain.dim)
    worst = _Worst()
    for x, y in zip(xs, ys):
        worst.feed(np.max(np.abs(spray(x, y) - oracle(x, y))), x, y)
    return _report("canonical_spray_oracle", worst, len(xs), config.tolerance)


def check_landsberg_kernel(bundle, config):
    """iota kills the Landsberg tensor; Riemannian energies kill it outright."""
    engine = _engine(config)
    xs, ys = bundle.domain.sample(config.samples, config.seed)
    lan = landsberg_tensor(bundle.lagrangian, engine)
    hooked = liouville_contract(lan)
    worst = _Worst()
    for x, y in zip(xs, ys):
        worst.feed(np.max(np.abs(hooked(x, y))), x, y)
        if bundle.riemannian:
            worst.feed(np.max(np.abs(lan(x, y))), x, y)
    return _report("landsberg_kernel", worst, len(xs), config.tolerance)


def check_torsion_residue(bundle, config):
    """residue(N) = (1/2) torsion . y, and iota kills the residue."""
    engine = _engine(config)
    xs, ys = bundle.domain.sample(config.samples, config.seed)
    N = bundle.nonlinear
    res = nonlinear_residue(N, engine)
    half_tor = scale(liouville_contract(torsion(N, engine)), 0.5)
    hooked = liouville_contract(res)
    worst = _Worst()
    for x, y in zip(xs, ys):
        worst.feed(np.max(np.abs(res(x, y) - half_tor(x, y))), x, y)
        worst.feed(np.max(np.abs(hooked(x, y))), x, y)
    return _report("torsion_residue", worst, len(xs), config.tolerance)


def check_cocycle_coherence(bundle, config):
    """Transform-then-operate equals operate-then-transform across the
    bundle's transition, plus the closed cocycle forms on the flat plane."""
    engine = _engine(config)
    t = bundle.transition
    xs, ys = bundle.domain.sample(config.samples, config.seed)
    worst = _Worst()

    flat_spray = Spray(zero_field(bundle.domain, 1, 0, 2.0))
    flat_N = NonlinearConnection(zero_field(bundle.domain, 1, 1, 1.0))
    flat_gamma = AnisotropicConnection(zero_field(bundle.domain, 1, 2, 0.0))
    moved_spray = transform_connection(flat_spray, t)
    moved_N = transform_connection(flat_N, t)
    moved_gamma = transform_connection(flat_gamma, t)
    gamma_expect = np.zeros((2, 2, 2))
    gamma_expect[0, 1, 1] = -2.0
    for x, y in zip(xs, ys):
        xt, yt = t.push_point(x, y)
        G = moved_spray(xt, yt)
        worst.feed(abs(G[0] + yt[1] ** 2), x, y)
        worst.feed(abs(G[1]), x, y)
        Nv = moved_N(xt, yt)
        worst.feed(np.max(np.abs(Nv - np.array([[0.0, -2.0 * yt[1]],
                                                [0.0, 0.0]]))), x, y)
        worst.feed(np.max(np.abs(moved_gamma(xt, yt) - gamma_expect)), x, y)

    for obj in (flat_spray, flat_N, flat_gamma,
                bundle.lagrangian.ell_field()):
        for defect in coherence_defect(obj, t, xs, ys, engine).values():
            worst.feed(defect, xs[0], ys[0])
    return _report("cocycle_coherence", worst, len(xs), config.tolerance)


def check_linear_roundtrip(bundle, config):
    """The four classical linear connections are strongly regular, induce
    the canonical N, and project back onto their source connections."""
    engine = _engine(config)
    xs, ys = bundle.domain.sample(config.samples, config.seed)
    L = bundle.lagrangian
    Nhat = raise_connection(canonical_spray(L, engine), engine).coefficients
    sources = {"berwald": berwald_connection(L, engine).coefficients,
               "chern": chern_connection(L, engine).coefficients}
    worst = _Worst()
    for kind in ("berwald", "chern", "hashiguchi", "cartan"):
        conn = classical_linear(L, kind, engine)
        induced = induced_nonlinear(conn).coefficients
        back = project_intrinsic(conn).coefficients
        source = sources["berwald" if kind in ("berwald", "hashiguchi")
                         else "chern"]
        for x, y in zip(xs, ys):
            if not is_strongly_regular(conn, x, y, tol=1e-9):
                worst.feed(1.0, x, y)
            worst.feed(np.max(np.abs(induced(x, y) - Nhat(x, y))), x, y)
            worst.feed(np.max(np.abs(back(x, y) - source(x, y))), x, y)
    return _report("linear_roundtrip", worst, len(xs), config.tolerance)


def check_functional_laws(bundle, config):
    """Extend-then-restrict is the identity; gauge-symmetrized functionals
    ignore in-kernel shifts and cannot tell Chern from Berwald."""
    engine = _engine(config)
    L = bundle.lagrangian
    domain = bundle.domain
    count = min(config.samples, 32)

    spray_action = ActionFunctional(
        "spray", lambda G, x, y: float(G(x, y) @ G(x, y)) + float(y @ y),
        domain, count=count, seed=config.seed)
    spray = canonical_spray(L, engine)
    direct = evaluate_action(spray_action, spray)
    roundtrip = evaluate_action(
        restrict_functional(extend_functional(spray_action, engine), engine),
        spray)
    worst = _Worst()
    worst.feed(abs(direct - roundtrip) / (1.0 + abs(direct)),
               spray_action.xs[0], spray_action.ys[0])

    gamma_action = ActionFunctional(
        "anisotropic",
        lambda g, x, y: float(np.sum(g(x, y) ** 2)),
        domain, count=count, seed=config.seed + 7)
    sym = gauge_symmetrize(gamma_action, engine)
    berwald = berwald_connection(L, engine)
    base_val = evaluate_action(sym, berwald)

    rng = np.random.default_rng(config.seed + 13)
    shift = kernel_shift(domain, rng.normal(size=(2, 2, 2, 2)))
    shifted = AnisotropicConnection(add(berwald.coefficients, shift))
    worst.feed(abs(evaluate_action(sym, shifted) - base_val)
               / (1.0 + abs(base_val)),
               gamma_action.xs[0], gamma_action.ys[0])

    chern = chern_connection(L, engine)
    worst.feed(abs(evaluate_action(sym, chern) - base_val)
               / (1.0 + abs(base_val)),
               gamma_action.xs[0], gamma_action.ys[0])
    return _report("functional_laws", worst, count, config.tolerance)


def check_geodesic_conservation(bundle, config):
    """The energy is constant along canonical-spray geodesics."""
    engine = _engine(config)
    L = bundle.lagrangian
    spray = canonical_spray(L, engine)
    xs, ys = bundle.domain.sample(1, config.seed)
    path = geodesic_integrate(spray, xs[0], ys[0], 1e-3, 200)
    e0 = float(L.field(*path.points[0]))
    worst = _Worst()
    for x, y in path.points:
        worst.feed(abs(float(L.field(x, y)) - e0) / max(1e-12, abs(e0)), x, y)
    if not path.completed:
        worst.feed(1.0, xs[0], ys[0])
    return _report("geodesic_conservation", worst, len(path.points),
                   config.tolerance)


CHECKS = {
    "euler": check_euler,
    "ladder_roundtrip": check_ladder_roundtrip,
    "legendre_residue": check_legendre_residue,
    "wick_identity": check_wick_identity,
    "signature_table": check_signature_table,
    "canonical_spray_oracle": check_canonical_spray_oracle,
    "landsberg_kernel": check_landsberg_kernel,
    "torsion_residue": check_torsion_residue,
    "cocycle_coherence": check_cocycle_coherence,
    "linear_roundtrip": check_linear_roundtrip,
    "functional_laws": check_functional_laws,
    "geodesic_conservation": check_geodesic_conservation,
}


def applicable_checks(bundle):
    names = ["euler"]
    if bundle.lagrangian is not None:
        names += ["ladder_roundtrip", "legendre_residue",
                  "canonical_spray_oracle", "landsberg_kernel",
                  "linear_roundtrip", "functional_laws",
                  "geodesic_conservation"]
    if bundle.metric is not None and bundle.kappa is not None:
        names += ["wick_identity", "signature_table"]
    if bundle.nonlinear is not None:
        names.append("torsion_residue")
    if bundle.transition is not None:
        names.append("cocycle_coherence")
    return sorted(names)

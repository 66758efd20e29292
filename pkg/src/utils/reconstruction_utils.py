"""
Tomography engine: Λ matrices and their inversion, time selection, the
closed-form qubit solution, general phase retrieval by lifting, and the
exact-model fit.
"""

import itertools
import logging
import math
from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union
import numpy as np
from scipy.optimize import least_squares

from src.errors import (
    DataMismatch,
    DegenerateInput,
    DimensionMismatch,
    DomainError,
    FrameDeficient,
    InconsistentData,
    NoInvertibleTimes,
    NonConvergence,
    SingularLambda,
    StroboscopicError
)
from src.models.state_models import StateVector, Projector, BlochParameters
from src.models.spectral_models import MinimalPolynomialInfo
from src.models.frame_models import Frame, HermitianBasisCoordinates
from src.models.measurement_models import MeasurementRecord
from src.models.reconstruction_models import (
    LambdaMatrix,
    IntensityVector,
    ReconstructionMethod,
    ReconstructionDiagnostics,
    ReconstructionReport
)
from src.settings import get_settings
from src.utils.state_utils import bloch_to_state, canonical_phase, fidelity, make_state, random_state
from src.utils.spectral_utils import HamiltonianLike, alpha_at, as_hermitian, minimal_polynomial, propagator
from src.utils.frame_utils import build_frame, check_necessary_condition, frame_intensities
from src.utils.injectivity_utils import check_injectivity, coords_to_hermitian, measurement_rows
from src.utils.measurement_utils import make_rng, max_discrepancy

logger = logging.getLogger(__name__)

ReconstructionMode = Literal["factored", "exact-fit"]

# Worked qubit example: H = σ_y measured along (-1, 2)/√5 and (2, i)/√5
SIGMA_Y = np.array([[0, -1j], [1j, 0]])
REFERENCE_DIRECTIONS = (
    np.array([-1, 2], dtype=np.complex128) / math.sqrt(5),
    np.array([2, 1j], dtype=np.complex128) / math.sqrt(5)
)
# Intensities (I1⁰, I1¹, I2⁰, I2¹) = 1/2 + QUBIT_DESIGN @ (cos θ, sin θ cos φ, sin θ sin φ)
QUBIT_DESIGN = np.array([
    [-0.3, -0.4, 0.0],
    [0.3, 0.4, 0.0],
    [0.3, 0.0, 0.4],
    [-0.3, 0.0, 0.4]
])
TIME_MATCH_TOLERANCE = 1e-12


# ============================================================================
# Λ matrix and invertibility
# ============================================================================

def lambda_matrix(info: MinimalPolynomialInfo, times: Sequence[float]) -> LambdaMatrix:
    """
    Λ with entry (j, k) = |α_k(t_j)|².

    Args:
        info: Minimal polynomial of H
        times: Time instants t_1..t_p

    Returns:
        LambdaMatrix of shape p x μ
    """
    if len(times) == 0:
        raise DegenerateInput("Lambda needs at least one time instant")
    rows = [(np.abs(alpha_at(info, t).values) ** 2).tolist() for t in times]
    return LambdaMatrix(entries=rows, times=[float(t) for t in times])


def lambda_determinant(lm: LambdaMatrix) -> Optional[float]:
    """det Λ, or None when Λ is not square."""
    if lm.p != lm.mu:
        return None
    return float(np.linalg.det(np.asarray(lm.entries)))


def check_theorem1(lm: LambdaMatrix, mu: int) -> bool:
    """
    Invertibility condition: p = μ and |det Λ| above the threshold.

    Args:
        lm: Λ matrix
        mu: Degree of the minimal polynomial

    Returns:
        True when the intensities can be recovered from the data
    """
    if lm.p != mu or lm.mu != mu:
        return False
    return abs(lambda_determinant(lm)) > get_settings().lambda_det_threshold


def select_times(
    info: MinimalPolynomialInfo,
    horizon: float,
    grid: int,
    count: Optional[int] = None
) -> List[float]:
    """
    Time instants with t_1 = 0 and the remaining μ - 1 picked from the grid
    horizon * j / grid, j = 1..grid, maximizing |det Λ| by exhaustive search.

    Args:
        info: Minimal polynomial of H
        horizon: Search interval (0, horizon]
        grid: Number of grid points (>= μ)
        count: Requested number of instants; must equal μ when given

    Returns:
        μ time instants in ascending order

    Raises:
        DomainError: On invalid horizon, grid or count
        NoInvertibleTimes: If every grid choice leaves Λ singular
    """
    mu = info.mu
    if count is not None and count != mu:
        raise DomainError(f"Λ needs p = μ time instants; requested {count}, μ = {mu}")
    if not horizon > 0 or not math.isfinite(horizon):
        raise DomainError(f"horizon must be positive, got {horizon}")
    if grid < mu:
        raise DomainError(f"grid must be >= μ = {mu}, got {grid}")
    if mu == 1:
        return [0.0]

    candidates = [horizon * j / grid for j in range(1, grid + 1)]
    first_row = np.abs(alpha_at(info, 0.0).values) ** 2
    rows = np.array([np.abs(alpha_at(info, t).values) ** 2 for t in candidates])

    best_det, best_combo = -1.0, None
    combos = itertools.combinations(range(grid), mu - 1)
    while True:
        chunk = list(itertools.islice(combos, 20000))
        if not chunk:
            break
        picks = np.array(chunk)
        stacks = np.concatenate(
            [np.broadcast_to(first_row, (len(chunk), 1, mu)), rows[picks]],
            axis=1
        )
        dets = np.abs(np.linalg.det(stacks))
        index = int(np.argmax(dets))
        if dets[index] > best_det:
            best_det, best_combo = float(dets[index]), chunk[index]

    if best_combo is None or best_det <= get_settings().lambda_det_threshold:
        raise NoInvertibleTimes(
            f"No choice of {mu - 1} instants on a {grid}-point grid over (0, {horizon}] gives an invertible Λ "
            f"(best |det| = {max(best_det, 0.0):.3e})"
        )
    logger.debug(f"Selected times with |det Λ| = {best_det:.6f}")
    return [0.0] + [candidates[j] for j in best_combo]


# ============================================================================
# Intensity recovery
# ============================================================================

def _group_records(
    data: Sequence[MeasurementRecord],
    labels: Optional[Sequence[str]] = None
) -> Dict[str, List[MeasurementRecord]]:
    """Records per projector label, in the given label order (or first appearance)."""
    grouped: Dict[str, List[MeasurementRecord]] = {}
    if labels is not None:
        grouped = {label: [] for label in labels}
    for record in data:
        if labels is not None and record.projector_label not in grouped:
            raise DataMismatch(f"Record for unknown projector '{record.projector_label}'")
        grouped.setdefault(record.projector_label, []).append(record)
    missing = [label for label, records in grouped.items() if not records]
    if missing:
        raise DataMismatch(f"No records for projector(s): {', '.join(missing)}")
    return grouped


def data_times(data: Sequence[MeasurementRecord]) -> List[float]:
    """Distinct time instants of the data, ascending."""
    distinct: List[float] = []
    for t in sorted(record.time for record in data):
        if not distinct or abs(t - distinct[-1]) > TIME_MATCH_TOLERANCE * max(1.0, abs(t)):
            distinct.append(t)
    return distinct


def check_data_times(data: Sequence[MeasurementRecord], times: Sequence[float]) -> None:
    """
    Require the data's distinct instants to be exactly the given times.

    Raises:
        DataMismatch: If an instant is missing from the data or not among the times
    """
    def _matches(a: float, b: float) -> bool:
        return abs(a - b) <= TIME_MATCH_TOLERANCE * max(1.0, abs(b))

    observed = data_times(data)
    unexpected = [t for t in observed if not any(_matches(t, s) for s in times)]
    missing = [s for s in times if not any(_matches(t, s) for t in observed)]
    if unexpected or missing:
        raise DataMismatch(
            f"Data times {observed} do not match configured times {list(times)} "
            f"(unexpected {unexpected}, missing {missing})"
        )


def _values_at(records: Sequence[MeasurementRecord], times: Sequence[float], label: str) -> np.ndarray:
    """Measured values ordered by the given times; every time exactly once."""
    values = np.full(len(times), np.nan)
    for record in records:
        matches = [
            j for j, t in enumerate(times)
            if abs(record.time - t) <= TIME_MATCH_TOLERANCE * max(1.0, abs(t))
        ]
        if not matches:
            raise DataMismatch(f"Projector '{label}' has a record at t={record.time}, not among Λ times {list(times)}")
        if not np.isnan(values[matches[0]]):
            raise DataMismatch(f"Projector '{label}' has duplicate records at t={record.time}")
        values[matches[0]] = record.value
    if np.any(np.isnan(values)):
        absent = [times[j] for j in range(len(times)) if np.isnan(values[j])]
        raise DataMismatch(f"Projector '{label}' has no records at t={absent}")
    return values


def recover_intensities(
    lm: LambdaMatrix,
    data: Sequence[MeasurementRecord],
    labels: Optional[Sequence[str]] = None
) -> IntensityVector:
    """
    Solve Λ x = m per projector.

    Args:
        lm: Λ matrix at the data's time instants
        data: Records for every projector at every Λ time
        labels: Projector order (default: order of first appearance)

    Returns:
        IntensityVector; negative solutions are clamped to 0 with a warning

    Raises:
        SingularLambda: If Λ is not square or |det Λ| is below threshold
        DataMismatch: If records do not match the Λ times
    """
    settings = get_settings()
    if not check_theorem1(lm, lm.mu):
        det = lambda_determinant(lm)
        detail = "not square" if det is None else f"|det Λ| = {abs(det):.3e}"
        raise SingularLambda(f"Λ at times {lm.times} is not invertible ({detail}); need p = μ = {lm.mu}")

    matrix = np.asarray(lm.entries)
    condition = float(np.linalg.cond(matrix))
    if condition > settings.lambda_condition_warning:
        logger.warning(f"Λ is ill-conditioned (condition number {condition:.3e})")

    values = {}
    for label, records in _group_records(data, labels).items():
        measured = _values_at(records, lm.times, label)
        solution = np.linalg.solve(matrix, measured)
        if np.any(solution < 0):
            logger.warning(f"Clamping negative intensities for '{label}' (min {solution.min():.3e}) to 0")
            solution = np.clip(solution, 0.0, None)
        values[label] = solution.tolist()
    return IntensityVector(values=values)


# ============================================================================
# Closed-form qubit solution
# ============================================================================

def is_reference_qubit_setup(H: HamiltonianLike, projectors: Sequence[Projector]) -> bool:
    """Whether H = σ_y with the projectors (-1, 2)/√5 and (2, i)/√5, in that order, up to phase."""
    H = as_hermitian(H)
    if H.dim != 2 or len(projectors) != 2:
        return False
    if np.max(np.abs(H.entries - SIGMA_Y)) > 1e-12:
        return False
    return all(
        abs(np.vdot(reference, projector.direction.components)) ** 2 > 1 - 1e-12
        for reference, projector in zip(REFERENCE_DIRECTIONS, projectors)
    )


def qubit_intensities(bloch: BlochParameters) -> np.ndarray:
    """
    Intensities of the worked qubit frame as functions of the Bloch angles:
    (5 ∓ 3cos θ ∓ 4 sin θ cos φ)/10 for the first projector and
    (5 ± 3cos θ + 4 sin θ sin φ)/10 for the second.

    Returns:
        (I1⁰, I1¹, I2⁰, I2¹)
    """
    bloch_vector = np.array([
        math.cos(bloch.theta),
        math.sin(bloch.theta) * math.cos(bloch.phi),
        math.sin(bloch.theta) * math.sin(bloch.phi)
    ])
    return 0.5 + QUBIT_DESIGN @ bloch_vector


def qubit_closed_form(iv: IntensityVector, labels: Sequence[str]) -> BlochParameters:
    """
    Invert the four qubit intensities for (cos θ, sin θ cos φ, sin θ sin φ),
    then θ = arccos(cos θ) and φ = atan2(sin θ sin φ, sin θ cos φ).

    Args:
        iv: Recovered intensities
        labels: The two projector labels in reference order

    Returns:
        BlochParameters; φ = 0 at the poles

    Raises:
        InconsistentData: If |cos θ| exceeds 1 beyond rounding
    """
    if len(labels) != 2 or any(len(iv.values.get(label, [])) != 2 for label in labels):
        raise DimensionMismatch("The closed form needs two projectors with two intensities each")
    measured = np.array(iv.values[labels[0]] + iv.values[labels[1]])
    (cos_theta, x, y), *_ = np.linalg.lstsq(QUBIT_DESIGN, measured - 0.5, rcond=None)

    tolerance = get_settings().clamp_tolerance
    if abs(cos_theta) > 1 + tolerance:
        raise InconsistentData(
            f"Intensities imply cos θ = {cos_theta:.6f}; they cannot come from a state under the factored model"
        )
    theta = math.acos(min(1.0, max(-1.0, cos_theta)))
    if math.hypot(x, y) < 1e-12 or math.sin(theta) == 0.0:
        return BlochParameters(theta=theta, phi=0.0)
    return BlochParameters(theta=theta, phi=math.atan2(y, x))


# ============================================================================
# General phase retrieval
# ============================================================================

def _frame_targets(frame: Frame, intensities: Union[IntensityVector, np.ndarray]) -> np.ndarray:
    """Intensities in frame row order."""
    if isinstance(intensities, IntensityVector):
        try:
            targets = np.array([
                intensities.values[label][k]
                for label, (_, k) in zip(frame.projector_labels, frame.index)
            ])
        except (KeyError, IndexError) as e:
            raise DataMismatch(f"Intensities do not cover the frame: missing {e}") from None
    else:
        targets = np.asarray(intensities, dtype=float).reshape(-1)
    if targets.size != frame.size:
        raise DataMismatch(f"Expected {frame.size} intensities, got {targets.size}")
    return targets


def _lifting_init(rows: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """Top eigenvector of the min-norm Hermitian least-squares solution, unit norm."""
    coords, *_ = np.linalg.lstsq(measurement_rows(rows), targets, rcond=None)
    lifted = coords_to_hermitian(HermitianBasisCoordinates(coords=coords.tolist()))
    eigenvalues, eigenvectors = np.linalg.eigh(lifted.entries)
    scale = max(abs(eigenvalues[-1]), np.finfo(float).tiny)
    top = eigenvalues >= eigenvalues[-1] - 1e-8 * scale
    # degenerate top eigenspace: equal-weight superposition
    start = eigenvectors[:, top].sum(axis=1)
    return start / np.linalg.norm(start)


def _refine(rows: np.ndarray, targets: np.ndarray, start: np.ndarray, iterations: int) -> np.ndarray:
    """
    Gauss-Newton on Σ_n (|<θ_n|x>|² - y_n)² in the real coordinates
    (Re x, Im x) with step halving.
    """
    d = rows.shape[1]

    def residuals(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        amplitudes = rows.conj() @ x
        return np.abs(amplitudes) ** 2 - targets, amplitudes

    x = start
    r, amplitudes = residuals(x)
    cost = float(r @ r)
    for _ in range(iterations):
        if cost < 1e-30:
            break
        weighted = amplitudes[:, None] * rows
        jacobian = 2 * np.hstack([weighted.real, weighted.imag])
        step, *_ = np.linalg.lstsq(jacobian, -r, rcond=None)
        direction = step[:d] + 1j * step[d:]

        improved = False
        length = 1.0
        for _ in range(40):
            trial = x + length * direction
            trial_r, trial_amplitudes = residuals(trial)
            trial_cost = float(trial_r @ trial_r)
            if trial_cost < cost:
                x, r, amplitudes, cost = trial, trial_r, trial_amplitudes, trial_cost
                improved = True
                break
            length /= 2
        if not improved:
            break
    return x


def general_phase_retrieval(
    frame: Frame,
    iv: Union[IntensityVector, np.ndarray],
    refine_iters: Optional[int] = None
) -> StateVector:
    """
    Recover a state from frame intensities: lifting to a Hermitian least-squares
    problem, top-eigenvector initialization, then Gauss-Newton refinement.

    Args:
        frame: Spanning measurement frame
        iv: Intensities (IntensityVector keyed by label, or an array in frame order)
        refine_iters: Maximum refinement steps (default from settings)

    Returns:
        StateVector with canonical global phase

    Raises:
        FrameDeficient: If the frame does not span the space
    """
    refine_iters = get_settings().refine_iterations if refine_iters is None else refine_iters
    spanning = check_necessary_condition(frame)
    if not spanning.spans:
        raise FrameDeficient(
            f"Frame of rank {spanning.rank} does not span C^{frame.dim} (defect {spanning.defect_dimension})"
        )
    targets = _frame_targets(frame, iv)
    start = _lifting_init(frame.vectors, targets)
    refined = _refine(frame.vectors, targets, start, refine_iters)
    return make_state(canonical_phase(refined))


# ============================================================================
# Exact-model fit
# ============================================================================

def angles_to_state(angles: np.ndarray) -> StateVector:
    """
    Generalized spherical coordinates: d - 1 polar angles for the magnitudes,
    then d - 1 relative phases; the first component is real.
    """
    angles = np.asarray(angles, dtype=float)
    if angles.size < 2 or angles.size % 2:
        raise DomainError(f"Need 2d - 2 angles, got {angles.size}")
    d = angles.size // 2 + 1
    polar, phases = angles[:d - 1], angles[d - 1:]
    magnitudes = np.empty(d)
    running = 1.0
    for j in range(d - 1):
        magnitudes[j] = running * math.cos(polar[j])
        running *= math.sin(polar[j])
    magnitudes[d - 1] = running
    components = magnitudes.astype(np.complex128)
    components[1:] *= np.exp(1j * phases)
    return StateVector(components=components / np.linalg.norm(components))


def state_to_angles(state: StateVector) -> np.ndarray:
    """Inverse of angles_to_state after removing the global phase."""
    components = canonical_phase(state.components)
    magnitudes = np.abs(components)
    d = state.dim
    polar = [math.atan2(float(np.linalg.norm(magnitudes[j + 1:])), magnitudes[j]) for j in range(d - 1)]
    phases = np.angle(components[1:])
    return np.concatenate([polar, phases])


def _exact_rows(
    H: HamiltonianLike,
    projectors: Sequence[Projector],
    data: Sequence[MeasurementRecord]
) -> Tuple[np.ndarray, np.ndarray]:
    """Rows U(t)†|i> so that the exact prediction of record n is |<w_n|ψ>|²."""
    by_label = {projector.label: projector for projector in projectors}
    cache: Dict[float, np.ndarray] = {}
    rows, targets = [], []
    for record in data:
        if record.projector_label not in by_label:
            raise DataMismatch(f"Record for unknown projector '{record.projector_label}'")
        if record.time not in cache:
            cache[record.time] = propagator(H, record.time).entries
        direction = by_label[record.projector_label].direction.components
        rows.append(cache[record.time].conj().T @ direction)
        targets.append(record.value)
    return np.array(rows), np.array(targets)


def exact_fit(
    H: HamiltonianLike,
    projectors: Sequence[Projector],
    data: Sequence[MeasurementRecord],
    starts: Sequence[StateVector] = (),
    random_starts: Optional[int] = None,
    seed: int = 0,
    tolerance: Optional[float] = None
) -> Tuple[StateVector, float]:
    """
    Nonlinear least squares of ψ(0) against exact-evolution predictions for
    every record, over the 2d - 2 sphere angles.

    Starts run in order (given starts, the lifted solution of the exact
    rows, then seeded random ones); the lowest residual wins and ties keep
    the earlier start.

    Args:
        H: Hamiltonian
        projectors: Measured projectors
        data: Measurement records
        starts: Initial guesses tried first
        random_starts: Number of seeded random starts (default from settings)
        seed: Base seed; random start k draws from make_rng(seed, k)
        tolerance: Residual norm accepted (default from settings)

    Returns:
        (best state, residual norm)

    Raises:
        NonConvergence: If no start reaches the tolerance
    """
    settings = get_settings()
    H = as_hermitian(H)
    random_starts = settings.exact_fit_random_starts if random_starts is None else random_starts
    tolerance = settings.exact_fit_residual_tolerance if tolerance is None else tolerance
    if not data:
        raise DegenerateInput("exact-fit needs at least one record")

    rows, targets = _exact_rows(H, projectors, data)
    initial = list(starts)
    try:
        lifted = _refine(rows, targets, _lifting_init(rows, targets), settings.refine_iterations)
        initial.append(make_state(lifted))
    except StroboscopicError as e:
        logger.debug(f"No lifted start for exact-fit: {e}")
    initial += [random_state(H.dim, make_rng(seed, k)) for k in range(random_starts)]
    if not initial:
        raise DomainError("exact-fit needs at least one start")

    def residuals(angles: np.ndarray) -> np.ndarray:
        psi = angles_to_state(angles).components
        return np.abs(rows.conj() @ psi) ** 2 - targets

    best_state, best_residual = None, math.inf
    for index, start in enumerate(initial):
        result = least_squares(residuals, state_to_angles(start), method="trf", xtol=1e-14, ftol=1e-14, gtol=1e-14)
        residual = float(np.linalg.norm(result.fun))
        logger.debug(f"exact-fit start {index}: residual {residual:.3e}")
        if residual < best_residual:
            best_state, best_residual = angles_to_state(result.x), residual

    if best_residual > tolerance:
        raise NonConvergence(
            f"exact-fit residual {best_residual:.3e} exceeds {tolerance:.3e} after {len(initial)} starts"
        )
    return make_state(canonical_phase(best_state.components)), best_residual


def exact_fit_tolerance(data: Sequence[MeasurementRecord]) -> float:
    """Residual threshold: the base tolerance, widened by 6√n / (2√shots) for finite-shot data."""
    base = get_settings().exact_fit_residual_tolerance
    shots = [record.shots for record in data if not record.is_exact]
    if not shots:
        return base
    return base + 6 * math.sqrt(len(data)) / (2 * math.sqrt(min(shots)))


# ============================================================================
# Full pipeline
# ============================================================================

def _factored_state(
    H,
    projectors: Sequence[Projector],
    frame: Frame,
    iv: IntensityVector,
    refine_iters: Optional[int]
) -> Tuple[StateVector, ReconstructionMethod]:
    labels = [projector.label for projector in projectors]
    if is_reference_qubit_setup(H, projectors):
        return bloch_to_state(qubit_closed_form(iv, labels)), ReconstructionMethod.QUBIT_CLOSED_FORM
    return general_phase_retrieval(frame, iv, refine_iters), ReconstructionMethod.LIFTING


def reconstruct_dynamic(
    H: HamiltonianLike,
    projectors: Sequence[Projector],
    data: Sequence[MeasurementRecord],
    mode: ReconstructionMode = "factored",
    truth: Optional[StateVector] = None,
    attempts: Optional[int] = None,
    seed: int = 0,
    refine_iters: Optional[int] = None
) -> ReconstructionReport:
    """
    Reconstruct ψ(0) from stroboscopic measurement records.

    mode = factored inverts Λ for the intensities and solves the phase
    retrieval problem (closed form for the reference qubit setup, lifting
    otherwise). mode = exact-fit fits ψ(0) directly to exact-evolution
    predictions, starting from the factored answer when it is available.

    Args:
        H: Hamiltonian
        projectors: Measured projectors
        data: Records for every projector
        mode: 'factored' or 'exact-fit'
        truth: Optional ground truth for the fidelity
        attempts: Injectivity witness search starts
        seed: Seed for the witness search and the random starts
        refine_iters: Gauss-Newton steps of the lifting solver

    Returns:
        ReconstructionReport
    """
    if mode not in ("factored", "exact-fit"):
        raise DomainError(f"Unknown reconstruction mode '{mode}'")
    H = as_hermitian(H)
    if truth is not None and truth.dim != H.dim:
        raise DimensionMismatch(f"Truth has dimension {truth.dim}, Hamiltonian has {H.dim}")
    if not data:
        raise DataMismatch("No measurement records")
    labels = [projector.label for projector in projectors]
    _group_records(data, labels)

    info = minimal_polynomial(H)
    frame = build_frame(H, projectors)
    spanning = check_necessary_condition(frame)
    injectivity = check_injectivity(frame, attempts=attempts, seed=seed)

    times = data_times(data)
    lm = lambda_matrix(info, times)
    det_lambda = lambda_determinant(lm)
    condition = None
    if det_lambda is not None:
        value = float(np.linalg.cond(np.asarray(lm.entries)))
        if value > get_settings().lambda_condition_warning:
            condition = value if math.isfinite(value) else None

    if mode == "factored":
        iv = recover_intensities(lm, data, labels)
        state, method = _factored_state(H, projectors, frame, iv, refine_iters)
        targets = _frame_targets(frame, iv)
        residual = float(np.linalg.norm(frame_intensities(frame, state) - targets))
    else:
        starts = []
        if check_theorem1(lm, info.mu):
            try:
                iv = recover_intensities(lm, data, labels)
                starts.append(_factored_state(H, projectors, frame, iv, refine_iters)[0])
            except StroboscopicError as e:
                logger.info(f"No factored starting point for exact-fit: {e}")
        state, residual = exact_fit(
            H, projectors, data,
            starts=starts,
            seed=seed,
            tolerance=exact_fit_tolerance(data)
        )
        method = ReconstructionMethod.EXACT_FIT

    state = make_state(canonical_phase(state.components))
    discrepancy = max_discrepancy(H, truth if truth is not None else state, projectors, times)
    diagnostics = ReconstructionDiagnostics(
        mu=info.mu,
        times=times,
        det_lambda=det_lambda,
        lambda_condition=condition,
        spanning=spanning,
        injectivity=injectivity,
        residual=residual,
        model_discrepancy_max=discrepancy
    )
    return ReconstructionReport(
        recovered_state=state,
        fidelity_to_truth=fidelity(truth, state) if truth is not None else None,
        method=method,
        diagnostics=diagnostics
    )


__all__ = [
    'ReconstructionMode',
    'lambda_matrix',
    'lambda_determinant',
    'check_theorem1',
    'select_times',
    'data_times',
    'check_data_times',
    'recover_intensities',
    'is_reference_qubit_setup',
    'qubit_intensities',
    'qubit_closed_form',
    'general_phase_retrieval',
    'angles_to_state',
    'state_to_angles',
    'exact_fit',
    'exact_fit_tolerance',
    'reconstruct_dynamic'
]

"""
Parameter scans
Row production for every scan mode, parallel grid evaluation and the oracle comparison
"""

import csv
import itertools
import json
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple

from tqdm import tqdm

from dirac_steps import __version__
from dirac_steps.core.config import settings
from dirac_steps.core.dispersion import spatial_velocity_report, temporal_transition, temporal_velocity_report
from dirac_steps.core.em_analog import em_scatter_spatial, em_scatter_temporal
from dirac_steps.core.errors import BoundaryError, DiracStepsError, DomainError
from dirac_steps.core.ode_oracle import oracle_scatter
from dirac_steps.core.sharp_scattering import scatter_scalar_spatial, scatter_vector_temporal
from dirac_steps.core.smooth_step import smooth_scatter
from dirac_steps.core.units import natural_de_broglie_period
from dirac_steps.models.schemas import (
    IndexContrast,
    IntegrationSettings,
    OracleCompareSummary,
    ScanMode,
    ScanRequest,
    SmoothStepConfig,
)

logger = logging.getLogger(__name__)

Row = Dict[str, Any]
Task = Tuple[Callable[..., Row], Tuple[Any, ...]]

ORACLE_GRID = (0.5, 1.0, 2.0, 3.0, 3.5)
ORACLE_TAUS = (0.01, 0.1, 0.3, 1.0, 3.0)
# Asymptotic window for the oracle comparison: A(t) within ~2e-9 dA of its limits
ORACLE_SIGMA = 10.0

COLUMNS: Dict[ScanMode, List[str]] = {
    ScanMode.SHARP_TEMPORAL: [
        'qA_over_m', 'gamma_re', 'gamma_im', 'f_re', 'f_im', 'b_re', 'b_im', 'F', 'B', 'E_f_over_m', 'regime',
    ],
    ScanMode.SHARP_SPATIAL: [
        'qV_over_m', 'gamma_re', 'gamma_im', 'r_re', 'r_im', 't_re', 't_im', 'R', 'T', 'p_t_re', 'p_t_im', 'regime',
    ],
    ScanMode.EM_SPATIAL: ['N', 'r', 't', 'R', 'T', 'regime'],
    ScanMode.EM_TEMPORAL: ['N', 'f', 'b', 'F', 'B', 'F_plus_B', 'regime'],
    ScanMode.SMOOTH: [
        'tau', 'qA_over_m', 'f_re', 'f_im', 'b_re', 'b_im', 'F', 'B', 'B_sharp', 'regime',
    ],
    ScanMode.DISPERSION: [
        'step_over_m', 'E_f_over_m', 'E_b_over_m', 'vp_forward', 'vg_forward', 'vp_backward', 'vg_backward',
        'p_t_re', 'p_t_im', 'vp_transmitted', 'vg_transmitted', 'regime',
    ],
    ScanMode.ORACLE_COMPARE: ['tau', 'qA_over_m', 'F_closed', 'F_oracle', 'deviation', 'regime'],
}


# Row builders; each takes one grid point and returns one row

def _flag_row(mode: ScanMode, keys: Dict[str, float], regime: str) -> Row:
    """Row with only the grid coordinates and a regime flag; numeric fields empty"""
    row = {column: None for column in COLUMNS[mode]}
    row.update(keys)
    row['regime'] = regime
    return row


def _guarded(mode: ScanMode, keys: Dict[str, float], build: Callable[[], Row]) -> Row:
    try:
        return build()
    except BoundaryError as e:
        logger.debug("boundary at %s: %s", keys, e)
        return _flag_row(mode, keys, "boundary")
    except DomainError as e:
        logger.debug("domain error at %s: %s", keys, e)
        return _flag_row(mode, keys, "domain_error")
    except (DiracStepsError, ValueError, ArithmeticError) as e:
        logger.warning("grid point %s failed: %s", keys, e)
        return _flag_row(mode, keys, "failed")


def sharp_temporal_row(energy: float, step_over_m: float, mass: float) -> Row:
    def build() -> Row:
        outcome = scatter_vector_temporal(energy, 0.0, step_over_m * mass, mass)
        return {
            'qA_over_m': step_over_m,
            'gamma_re': outcome.gamma.real,
            'gamma_im': outcome.gamma.imag,
            'f_re': outcome.amp_primary.real,
            'f_im': outcome.amp_primary.imag,
            'b_re': outcome.amp_secondary.real,
            'b_im': outcome.amp_secondary.imag,
            'F': outcome.prob_primary,
            'B': outcome.prob_secondary,
            'E_f_over_m': outcome.energies['forward'] / mass,
            'regime': outcome.regime.value,
        }
    return _guarded(ScanMode.SHARP_TEMPORAL, {'qA_over_m': step_over_m}, build)


def sharp_spatial_row(energy: float, step_over_m: float, mass: float) -> Row:
    def build() -> Row:
        outcome = scatter_scalar_spatial(energy, 0.0, step_over_m * mass, mass)
        p_t = outcome.momenta['transmitted']
        return {
            'qV_over_m': step_over_m,
            'gamma_re': outcome.gamma.real,
            'gamma_im': outcome.gamma.imag,
            'r_re': outcome.amp_secondary.real,
            'r_im': outcome.amp_secondary.imag,
            't_re': outcome.amp_primary.real,
            't_im': outcome.amp_primary.imag,
            'R': outcome.prob_secondary,
            'T': outcome.prob_primary,
            'p_t_re': p_t.real / mass,
            'p_t_im': p_t.imag / mass,
            'regime': outcome.regime.value,
        }
    return _guarded(ScanMode.SHARP_SPATIAL, {'qV_over_m': step_over_m}, build)


def em_spatial_row(contrast: float) -> Row:
    def build() -> Row:
        if not contrast > 0:
            raise DomainError(f"index contrast must be positive, got {contrast}")
        outcome = em_scatter_spatial(IndexContrast.from_contrast(contrast))
        return {
            'N': contrast,
            'r': outcome.amp_secondary.real,
            't': outcome.amp_primary.real,
            'R': outcome.prob_secondary,
            'T': outcome.prob_primary,
            'regime': outcome.regime.value,
        }
    return _guarded(ScanMode.EM_SPATIAL, {'N': contrast}, build)


def em_temporal_row(contrast: float) -> Row:
    def build() -> Row:
        if not contrast > 0:
            raise DomainError(f"index contrast must be positive, got {contrast}")
        outcome = em_scatter_temporal(IndexContrast.from_contrast(contrast))
        return {
            'N': contrast,
            'f': outcome.amp_primary.real,
            'b': outcome.amp_secondary.real,
            'F': outcome.prob_primary,
            'B': outcome.prob_secondary,
            'F_plus_B': outcome.prob_primary + outcome.prob_secondary,
            'regime': outcome.regime.value,
        }
    return _guarded(ScanMode.EM_TEMPORAL, {'N': contrast}, build)


def smooth_row(energy: float, tau: float, step_over_m: float, mass: float) -> Row:
    def build() -> Row:
        config = SmoothStepConfig.from_energy(energy, 0.0, step_over_m * mass, tau, mass=mass)
        outcome = smooth_scatter(config)
        sharp = scatter_vector_temporal(energy, 0.0, step_over_m * mass, mass)
        return {
            'tau': tau,
            'qA_over_m': step_over_m,
            'f_re': outcome.amp_primary.real,
            'f_im': outcome.amp_primary.imag,
            'b_re': outcome.amp_secondary.real,
            'b_im': outcome.amp_secondary.imag,
            'F': outcome.prob_primary,
            'B': outcome.prob_secondary,
            'B_sharp': sharp.prob_secondary,
            'regime': outcome.regime.value,
        }
    return _guarded(ScanMode.SMOOTH, {'tau': tau, 'qA_over_m': step_over_m}, build)


def dispersion_row(energy: float, step_over_m: float, mass: float) -> Row:
    """Temporal A step and spatial V step of the same height, side by side"""
    def build() -> Row:
        step = step_over_m * mass
        e_f, e_b = temporal_transition(energy, step, mass)
        temporal = temporal_velocity_report(energy, 0.0, step, mass)
        row = {
            'step_over_m': step_over_m,
            'E_f_over_m': e_f / mass,
            'E_b_over_m': e_b / mass,
            'vp_forward': temporal['forward']['phase'],
            'vg_forward': temporal['forward']['group'],
            'vp_backward': temporal['backward']['phase'],
            'vg_backward': temporal['backward']['group'],
            'p_t_re': None,
            'p_t_im': None,
            'vp_transmitted': None,
            'vg_transmitted': None,
            'regime': "propagating",
        }
        try:
            spatial = scatter_scalar_spatial(energy, 0.0, step, mass)
            velocities = spatial_velocity_report(energy, 0.0, step, mass)
        except BoundaryError:
            row['regime'] = "boundary"
            return row
        p_t = spatial.momenta['transmitted']
        row.update({
            'p_t_re': p_t.real / mass,
            'p_t_im': p_t.imag / mass,
            'vp_transmitted': velocities['transmitted']['phase'],
            'vg_transmitted': velocities['transmitted']['group'],
            'regime': spatial.regime.value,
        })
        return row
    return _guarded(ScanMode.DISPERSION, {'step_over_m': step_over_m}, build)


def oracle_row(energy: float, tau: float, step_over_m: float, mass: float, integration: IntegrationSettings) -> Row:
    def build() -> Row:
        config = SmoothStepConfig.from_energy(energy, 0.0, step_over_m * mass, tau, mass=mass)
        closed = smooth_scatter(config).prob_primary
        oracle = oracle_scatter(config, integration).prob_primary
        return {
            'tau': tau,
            'qA_over_m': step_over_m,
            'F_closed': closed,
            'F_oracle': oracle,
            'deviation': abs(closed - oracle),
            'regime': "propagating",
        }
    return _guarded(ScanMode.ORACLE_COMPARE, {'tau': tau, 'qA_over_m': step_over_m}, build)


# Scan driver

def default_taus(energy: float) -> List[float]:
    """T_dB/40, T_dB/4 and 2 T_dB of the incident electron, in natural units"""
    period = natural_de_broglie_period(energy)
    return [period / 40.0, period / 4.0, 2.0 * period]


def _tasks(request: ScanRequest) -> List[Task]:
    """Row builder and its arguments for every grid point; picklable for worker processes"""
    mass = settings.mass
    energy = request.energy_ratio * mass
    mode = request.mode
    grid = [float(x) for x in request.grid()]

    if mode == ScanMode.SHARP_TEMPORAL:
        return [(sharp_temporal_row, (energy, x, mass)) for x in grid]
    if mode == ScanMode.SHARP_SPATIAL:
        return [(sharp_spatial_row, (energy, x, mass)) for x in grid]
    if mode == ScanMode.EM_SPATIAL:
        return [(em_spatial_row, (x,)) for x in grid]
    if mode == ScanMode.EM_TEMPORAL:
        return [(em_temporal_row, (x,)) for x in grid]
    if mode == ScanMode.DISPERSION:
        return [(dispersion_row, (energy, x, mass)) for x in grid]

    taus = list(request.tau_list) or default_taus(energy)
    pairs = list(itertools.product(taus, grid))
    if mode == ScanMode.SMOOTH:
        return [(smooth_row, (energy, tau, x, mass)) for tau, x in pairs]

    integration = IntegrationSettings(t_start_sigma=ORACLE_SIGMA, t_end_sigma=ORACLE_SIGMA)
    return [(oracle_row, (energy, tau, x, mass, integration)) for tau, x in pairs]


def _run_task(task: Task) -> Row:
    build, args = task
    return build(*args)


def run_scan(request: ScanRequest, progress: bool = True) -> List[Row]:
    """
    Evaluate every grid point of a request

    Points run on up to request.jobs worker processes; rows come back in grid
    order (tau-major for the smooth and oracle modes).

    Args:
        request: Validated scan request
        progress: Show a tqdm progress bar

    Returns:
        List of rows keyed by the mode's columns
    """
    tasks = _tasks(request)
    logger.info("scan %s: %d points on %d worker(s)", request.mode.value, len(tasks), request.jobs)
    bar = tqdm(total=len(tasks), desc=f"  {request.mode.value}", leave=False, disable=not progress)

    rows: List[Row] = []
    pool = ProcessPoolExecutor(max_workers=request.jobs) if request.jobs > 1 else None
    try:
        if pool is None:
            results: Iterable[Row] = map(_run_task, tasks)
        else:
            results = pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * request.jobs)))
        for row in results:
            rows.append(row)
            bar.update(1)
        return rows
    finally:
        if pool is not None:
            pool.shutdown()
        bar.close()


def oracle_request(request: ScanRequest) -> ScanRequest:
    """Fill in the standard 5 x 5 comparison grid where the request leaves it open"""
    updates: Dict[str, Any] = {'mode': ScanMode.ORACLE_COMPARE}
    if request.grid_values is None:
        updates['grid_values'] = list(ORACLE_GRID)
    if not request.tau_list:
        updates['tau_list'] = list(ORACLE_TAUS)
    return request.model_copy(update=updates)


def run_oracle_compare(request: ScanRequest, progress: bool = True) -> Tuple[List[Row], OracleCompareSummary]:
    """Closed-form versus oracle forward probabilities with a max-norm summary"""
    rows = run_scan(oracle_request(request), progress)
    deviations = [row['deviation'] for row in rows if row['deviation'] is not None]
    failures = sum(1 for row in rows if row['deviation'] is None)
    worst = max(deviations) if deviations else math.inf
    summary = OracleCompareSummary(
        points=len(rows),
        failures=failures,
        max_deviation=worst,
        threshold=request.threshold,
        passed=failures == 0 and worst <= request.threshold,
    )
    return rows, summary


# Output

def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(rows: Iterable[Row], columns: Sequence[str], stream: TextIO) -> None:
    """RFC-4180 style CSV with repr() floats and empty cells for missing values"""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(column)) for column in columns])


def _json_value(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def write_json(rows: Iterable[Row], request: ScanRequest, stream: TextIO, summary: Optional[OracleCompareSummary] = None) -> None:
    """Rows wrapped in a header of mode, parameters, version and tolerances"""
    header = {
        'mode': request.mode.value,
        'parameters': request.model_dump(mode="json", exclude={'output_path'}),
        'version': __version__,
        'tolerances': {
            'hyp2f1_tol': settings.hyp2f1_tol,
            'ode_rel_tol': settings.ode_rel_tol,
            'ode_abs_tol': settings.ode_abs_tol,
            'boundary_tol': settings.boundary_tol,
            'oracle_threshold': request.threshold,
        },
    }
    if summary is not None:
        header['summary'] = {k: _json_value(v) for k, v in summary.model_dump().items()}
    payload = {
        'header': header,
        'rows': [{k: _json_value(v) for k, v in row.items()} for row in rows],
    }
    json.dump(payload, stream, indent=2, ensure_ascii=False)
    stream.write("\n")

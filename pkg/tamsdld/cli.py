"""Command line interface.

Four subcommands each produce one table, written as CSV or JSON:

``bound``
    Large deviation bound per ``(tau, epsilon)``.
``dist``
    Density, distribution and tail of the TAMSD on a grid.
``verify``
    Monte Carlo tail estimates against the two-sided bound.
``beta``
    Monte Carlo tail estimates of the exponent estimator against its
    one-sided bound.

Settings are taken, lowest precedence first, from built-in defaults, a
JSON file given with ``--config`` (or ``TAMSDLD_CONFIG``), environment
variables named ``TAMSDLD_`` plus the upper-cased option name (e.g.
``TAMSDLD_EPS_GRID``), and the command line.

Exit status is 0 on success, 1 if a dominance check failed, 2 for
invalid input and 3 for a numerical or resource failure.
"""
import argparse
import json
import os
import sys
from dataclasses import dataclass, fields

import numpy as np
import pandas as pd

import tamsdld
from tamsdld import bounds, distribution, models, simulate, spectrum
from tamsdld.util._functions import require_integer, require_limits


ENV_PREFIX = 'TAMSDLD_'

# trials needed before `verify` reports anything
MIN_VERIFY_TRIALS = 1000


def _split(text):
    return [item for item in text.split(',') if item.strip()]


def _int_list(text):
    return [int(item) for item in _split(text)]


def _float_list(text):
    return [float(item) for item in _split(text)]


# how to read each setting from an environment variable
_ENV_CONVERTERS = {
    'process': str,
    'diffusion': float,
    'hurst': float,
    'n': int,
    'tau': _int_list,
    'eps': _float_list,
    'eps_grid': str,
    'trials': int,
    'seed': int,
    'threads': int,
    'format': str,
    'out': str,
    'mass_tol': float,
    'method': str,
    'x_grid': str,
    'points': int,
}


def parse_grid(text, name='grid'):
    """Expand ``'lo:hi:steps'`` to `steps` evenly spaced values.

    Parameters
    ----------
    text : str
    name : str, default 'grid'
        Option name used in error messages.

    Returns
    -------
    ndarray
    """
    parts = str(text).split(':')
    if len(parts) != 3:
        raise ValueError(f"{name} must be 'lo:hi:steps', got {text!r}")
    try:
        lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ValueError(
            f"{name} must be 'lo:hi:steps' with numeric lo, hi and "
            f"integer steps, got {text!r}"
        ) from None
    if steps < 1:
        raise ValueError(f"{name} steps set to {steps}, must be at least 1")
    if hi < lo:
        raise ValueError(f"{name} has hi={hi} below lo={lo}")
    return np.linspace(lo, hi, steps)


def _as_tuple(value, cast):
    if value is None:
        return ()
    if isinstance(value, (list, tuple)):
        return tuple(cast(v) for v in value)
    return (cast(value),)


@dataclass(frozen=True)
class RunConfig:
    """Validated settings of one CLI run.

    Field names match the command line option names, and the JSON file
    given with ``--config`` uses the same keys.

    Raises
    ------
    ValueError
        If any setting is outside its domain, including every
        constraint of :py:class:`~tamsdld.models.ProcessModel` and
        :py:class:`~tamsdld.models.LagSpec`.
    """

    process: str = 'bm'
    diffusion: float = 0.5
    hurst: float = None
    n: int = None
    tau: tuple = ()
    eps: tuple = ()
    eps_grid: str = None
    trials: int = 10000
    seed: int = 0
    threads: int = 1
    format: str = 'csv'
    out: str = None
    mass_tol: float = None
    method: str = 'generic'
    x_grid: str = None
    points: int = 50

    def __post_init__(self):
        object.__setattr__(self, 'tau', _as_tuple(self.tau, int))
        object.__setattr__(self, 'eps', _as_tuple(self.eps, float))
        if self.process not in ('bm', 'fbm'):
            raise ValueError(
                f"process set to {self.process!r}, must be 'bm' or 'fbm'"
            )
        if self.n is None:
            raise ValueError('trajectory length -N is required')
        if not self.tau:
            raise ValueError('at least one --tau is required')
        # constructing them validates D, H, N and every tau
        _ = self.model, self.lags
        for value in self.epsilons:
            require_limits('eps', value, lower_bound=0)
        require_integer('trials', self.trials, 1)
        require_integer('seed', self.seed, 0)
        if self.seed >= 2**64:
            raise ValueError(
                f"seed set to {self.seed}, must fit in 64 unsigned bits"
            )
        require_integer('threads', self.threads, 0)
        require_integer('points', self.points, 1)
        if self.format not in ('csv', 'json'):
            raise ValueError(
                f"format set to {self.format!r}, must be 'csv' or 'json'"
            )
        if self.method not in ('generic', 'closed_form'):
            raise ValueError(
                f"method set to {self.method!r}, must be 'generic' or "
                "'closed_form'"
            )
        if self.mass_tol is not None:
            require_limits('mass_tol', self.mass_tol, 0, 1)
        if self.x_grid is not None:
            require_limits('x_grid', self.x_values, lower_bound=0)

    @property
    def model(self):
        """The :py:class:`~tamsdld.models.ProcessModel` being analyzed."""
        return models.ProcessModel(self.process, self.diffusion, self.hurst)

    @property
    def lags(self):
        return [models.LagSpec(self.n, tau) for tau in self.tau]

    @property
    def epsilons(self):
        """Deviations from ``--eps`` followed by the ``--eps-grid`` values."""
        values = list(self.eps)
        if self.eps_grid is not None:
            values.extend(parse_grid(self.eps_grid, 'eps_grid'))
        return np.array(values, dtype=float)

    @property
    def x_values(self):
        return parse_grid(self.x_grid, 'x_grid')

    def require_epsilons(self):
        """Deviations, raising ValueError if none were given."""
        values = self.epsilons
        if len(values) == 0:
            raise ValueError('at least one --eps or --eps-grid is required')
        return values


def _read_config_file(path):
    with open(path) as f:
        document = json.load(f)
    if not isinstance(document, dict):
        raise ValueError(f"config file {path} must hold a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(document) - known)
    if unknown:
        raise ValueError(
            f"config file {path} has unknown keys {unknown}; known keys "
            f"are {sorted(known)}"
        )
    return document


def _read_environ(environ):
    values = {}
    for name, convert in _ENV_CONVERTERS.items():
        key = ENV_PREFIX + name.upper()
        if key in environ:
            try:
                values[name] = convert(environ[key])
            except ValueError:
                raise ValueError(
                    f"cannot parse {key}={environ[key]!r}"
                ) from None
    return values


def load_config(options, environ=None):
    """Merge defaults, config file, environment and command line options.

    Parameters
    ----------
    options : dict
        Options given on the command line; absent options must be
        missing from the dict. ``options['config']`` names the JSON
        config file.
    environ : mapping, optional
        Environment variables, ``os.environ`` by default.

    Returns
    -------
    RunConfig
    """
    if environ is None:
        environ = os.environ
    options = dict(options)
    options.pop('command', None)
    values = {}
    path = options.pop('config', None) or environ.get(ENV_PREFIX + 'CONFIG')
    if path:
        values.update(_read_config_file(path))
    values.update(_read_environ(environ))
    values.update(options)
    return RunConfig(**values)


def cmd_bound(config):
    """Evaluate the two-sided TAMSD bound for each ``(tau, epsilon)``.

    ``method='generic'`` uses the full spectrum and
    ``method='closed_form'`` the closed form sum of squared
    eigenvalues.

    Returns
    -------
    table : DataFrame
    ok : bool
    """
    model = config.model
    eps = config.require_epsilons()
    if config.method == 'closed_form':
        if model.kind is models.ProcessKind.BM:
            closed_form = bounds.bm_deviation_bound
        else:
            closed_form = bounds.fbm_deviation_bound
    rows = []
    for lag in config.lags:
        if config.method == 'closed_form':
            result = closed_form(model, lag, eps)
        else:
            result = bounds.tamsd_deviation_bound(
                spectrum.model_spectrum(model, lag), lag, eps)
        for e, b, log_b in zip(eps, result.bound, result.log_bound):
            rows.append({
                'tau': lag.tau,
                'epsilon': e,
                'bound': b,
                'log_bound': log_b,
                'nu': result.nu,
                'c': result.c,
                'lambda_max': result.c / 2,
                'sum_lambda_sq': result.nu / 2,
                'method': config.method,
            })
    return pd.DataFrame(rows), True


def cmd_dist(config):
    """Tabulate the TAMSD distribution.

    The grid is ``--x-grid`` if given, otherwise the quantiles at
    ``--points`` equally spaced probabilities in (0, 1).

    Returns
    -------
    table : DataFrame
    ok : bool
    """
    model = config.model
    tables = []
    for lag in config.lags:
        series = distribution.build_series(
            spectrum.model_spectrum(model, lag),
            mass_tolerance=config.mass_tol
        )
        if config.x_grid is not None:
            x = config.x_values
        else:
            probabilities = np.arange(1, config.points + 1) / (
                config.points + 1)
            x = distribution.tamsd_quantile(series, probabilities)
        tables.append(pd.DataFrame({
            'tau': lag.tau,
            'x': x,
            'pdf': distribution.tamsd_pdf(series, x),
            'cdf': distribution.tamsd_cdf(series, x),
            'tail': distribution.tamsd_tail(series, x),
            'mass_deficit': series.mass_deficit,
            'K': series.k,
        }))
    return pd.concat(tables, ignore_index=True), True


def _exceeds(estimate, bound):
    # p_hat is significantly above a nontrivial bound
    return bound < 1 and estimate.p_hat - 3 * estimate.std_error > bound


def cmd_verify(config):
    """Compare Monte Carlo two-sided tail estimates with the bound.

    Returns
    -------
    table : DataFrame
    ok : bool
        False if any bound below 1 is exceeded by more than three
        binomial standard errors.
    """
    if config.trials < MIN_VERIFY_TRIALS:
        raise ValueError(
            f"trials set to {config.trials}, must be at least "
            f"{MIN_VERIFY_TRIALS} for verify"
        )
    model = config.model
    eps = config.require_epsilons()
    rows = []
    ok = True
    for lag in config.lags:
        result = bounds.tamsd_deviation_bound(
            spectrum.model_spectrum(model, lag), lag, eps)
        values = simulate.sample_tamsd(model, lag, config.trials,
                                       config.seed, config.threads)
        center = models.increment_mean_square(model, lag.tau)
        for e, b in zip(eps, result.bound):
            estimate = simulate.tail_estimate(
                values, center, e, simulate.Statistic.TAMSD_TWO_SIDED)
            ok = ok and not _exceeds(estimate, b)
            rows.append({
                'tau': lag.tau,
                'epsilon': e,
                'p_hat': estimate.p_hat,
                'ci_low': estimate.ci_low,
                'ci_high': estimate.ci_high,
                'bound': b,
                'dominated': estimate.ci_low <= b,
            })
    return pd.DataFrame(rows), ok


def cmd_beta(config):
    """Compare exponent estimator tail estimates with the one-sided bound.

    Tails are counted around both the exact exponent ``2H`` and the
    ensemble mean of the estimates.

    Returns
    -------
    table : DataFrame
    ok : bool
        False if either estimate exceeds a bound below 1 by more than
        three binomial standard errors.
    """
    if config.process != 'fbm':
        raise ValueError("beta requires --process fbm")
    model = config.model
    eps = config.require_epsilons()
    rows = []
    ok = True
    for lag in config.lags:
        # rejects tau = 1 and D != 1/2 before any sampling
        result = bounds.beta_estimator_bound(model, lag, eps)
        values = simulate.sample_beta_hat(model, lag, config.trials,
                                          config.seed, config.threads)
        beta_mean = float(np.mean(values))
        beta_se = float(np.std(values, ddof=1) / np.sqrt(len(values))
                        if len(values) > 1 else np.nan)
        for e, b in zip(eps, result.bound):
            analytic = simulate.tail_estimate(
                values, model.exponent, e, simulate.Statistic.BETA_RIGHT)
            ensemble = simulate.tail_estimate(
                values, beta_mean, e, simulate.Statistic.BETA_RIGHT)
            ok = ok and not (_exceeds(analytic, b) or _exceeds(ensemble, b))
            rows.append({
                'tau': lag.tau,
                'epsilon': e,
                'p_hat_analytic_center': analytic.p_hat,
                'p_hat_ensemble_center': ensemble.p_hat,
                'bound': b,
                'beta_mean': beta_mean,
                'beta_se': beta_se,
            })
    return pd.DataFrame(rows), ok


COMMANDS = {
    'bound': cmd_bound,
    'dist': cmd_dist,
    'verify': cmd_verify,
    'beta': cmd_beta,
}


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def format_table(table, fmt):
    """Render `table` as CSV (17 significant digits) or a JSON array.

    Parameters
    ----------
    table : DataFrame
    fmt : {'csv', 'json'}

    Returns
    -------
    str
    """
    if fmt == 'csv':
        return table.to_csv(index=False, float_format='%.17g')
    # NaN is not valid JSON
    records = table.astype(object).where(table.notna(), None).to_dict(
        orient='records')
    return json.dumps(records, indent=2, default=_json_default) + '\n'


def write_output(text, path=None):
    """Write `text` to `path`, or to stdout if `path` is None."""
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, 'w', newline='') as f:
            f.write(text)


def _common_options():
    common = argparse.ArgumentParser(add_help=False,
                                     argument_default=argparse.SUPPRESS)
    common.add_argument('--process', choices=['bm', 'fbm'])
    common.add_argument('--hurst', type=float,
                        help='Hurst index in (0, 1), FBM only')
    common.add_argument('--diffusion', type=float,
                        help='diffusion coefficient D (default 0.5)')
    common.add_argument('-N', dest='n', type=int, help='trajectory length')
    common.add_argument('--tau', type=int, action='append',
                        help='lag, may be repeated')
    common.add_argument('--eps', type=float, action='append',
                        help='deviation, may be repeated')
    common.add_argument('--eps-grid', dest='eps_grid', metavar='LO:HI:STEPS',
                        help='evenly spaced deviations')
    common.add_argument('--trials', type=int)
    common.add_argument('--seed', type=int, help='unsigned 64-bit seed')
    common.add_argument('--threads', type=int,
                        help='worker threads, 0 for all CPUs')
    common.add_argument('--format', choices=['csv', 'json'])
    common.add_argument('--out', metavar='PATH',
                        help='output file (default stdout)')
    common.add_argument('--config', metavar='PATH',
                        help='JSON file with default settings')
    common.add_argument('--mass-tol', dest='mass_tol', type=float,
                        help='series truncation mass tolerance')
    return common


def build_parser():
    """The ``tamsdld`` argument parser."""
    parser = argparse.ArgumentParser(
        prog='tamsdld',
        description='Large deviation bounds and exact distribution of '
                    'the TAMSD of Brownian and fractional Brownian motion.'
    )
    parser.add_argument('--version', action='version',
                        version=f"%(prog)s {tamsdld.__version__}")
    common = _common_options()
    commands = parser.add_subparsers(dest='command', required=True)
    bound = commands.add_parser('bound', parents=[common],
                                help='evaluate deviation bounds')
    bound.add_argument('--method', choices=['generic', 'closed_form'],
                       default=argparse.SUPPRESS)
    dist = commands.add_parser('dist', parents=[common],
                               help='tabulate the TAMSD distribution')
    dist.add_argument('--x-grid', dest='x_grid', metavar='LO:HI:STEPS',
                      default=argparse.SUPPRESS)
    dist.add_argument('--points', type=int, default=argparse.SUPPRESS,
                      help='number of quantiles without --x-grid')
    commands.add_parser('verify', parents=[common],
                        help='Monte Carlo check of the TAMSD bound')
    commands.add_parser('beta', parents=[common],
                        help='Monte Carlo check of the exponent bound')
    return parser


def main(argv=None, environ=None):
    """Run the CLI and return the exit status."""
    args = vars(build_parser().parse_args(argv))
    command = args['command']
    try:
        config = load_config(args, environ)
        table, ok = COMMANDS[command](config)
        text = format_table(table, config.format)
        write_output(text, config.out)
    except (ValueError, OSError) as err:
        print(f"tamsdld {command}: error: {err}", file=sys.stderr)
        return 2
    except RuntimeError as err:
        print(f"tamsdld {command}: {type(err).__name__}: {err}",
              file=sys.stderr)
        return 3
    return 0 if ok else 1


if __name__ == '__main__':
    sys.exit(main())

"""
Main entry point for the Kac polynomial / HN strata toolkit
Reads a quiver file, runs one computation or verifier and prints a table or JSON
"""

import functools
import json
import sys
from pathlib import Path

import click
import pandas as pd

import config
import exact_poly as ep
from errors import HnKacError, InputError
from ff_oracle import check_against_engine
from hn_strata import enumerate_hn_types, epsilon, flag_type_from_blocks, s0_commutant_dim, slope, strata_report
from hua_kac import (
    kac_polynomial, stabilization_study, stratified_decomposition, verify_thm_6_7, verify_thm_6_8_shift,
)
from quiver_core import Arrow, Quiver, multiply_edges, thm_2_5_hypothesis


def parse_quiver(path) -> Quiver:
    """
    Load a QuiverFile document

    Raises:
        InputError naming the file and the offending field
    """
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise InputError(f"{path}: cannot read quiver file ({e.strerror})")
    except UnicodeDecodeError:
        raise InputError(f"{path}: quiver file is not valid UTF-8")
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: malformed JSON at line {e.lineno} column {e.colno}: {e.msg}")

    if not isinstance(doc, dict):
        raise InputError(f"{path}: top level must be an object")
    vertices = doc.get("vertices")
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise InputError(f"{path}: 'vertices' must be a list of strings")
    raw_arrows = doc.get("arrows", [])
    if not isinstance(raw_arrows, list):
        raise InputError(f"{path}: 'arrows' must be a list")

    arrows = []
    for n, a in enumerate(raw_arrows):
        where = f"{path}: arrows[{n}]"
        if not isinstance(a, dict):
            raise InputError(f"{where} must be an object")
        for key in ("from", "to", "mult"):
            if key not in a:
                raise InputError(f"{where} is missing '{key}'")
        if not isinstance(a["from"], str) or not isinstance(a["to"], str):
            raise InputError(f"{where}: 'from' and 'to' must be vertex names")
        mult = a["mult"]
        if isinstance(mult, bool) or not isinstance(mult, int) or mult < 1:
            raise InputError(f"{where}: 'mult' must be a positive integer, got {mult!r}")
        arrows.append(Arrow(a["from"], a["to"], mult))

    try:
        return Quiver(tuple(vertices), tuple(arrows))
    except InputError as e:
        raise InputError(f"{path}: {e}")


def parse_vector(text, name):
    """'1,2,3' -> (1, 2, 3)"""
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise InputError(f"--{name} must be a comma separated list of integers, got {text!r}")


def parse_blocks(text):
    """'2,1;1,1' -> ((2, 1), (1, 1))"""
    return tuple(parse_vector(block, "type") for block in text.split(";") if block.strip())


def reports_errors(f):
    """Turn toolkit errors into an error line and the matching exit code"""
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except HnKacError as e:
            click.echo(f"❌ Error: {e}", err=True)
            raise SystemExit(e.exit_code)
    return wrapper


def quiver_options(need_dim=True, need_theta=False):
    """Shared --quiver / --dim / --theta / --multiply / --json / --out flags"""
    def decorate(f):
        options = [
            click.option("--quiver", "quiver_path", required=True, type=click.Path(dir_okay=False),
                         help="QuiverFile JSON document"),
            click.option("--dim", required=need_dim, help="Dimension vector a,b,... in vertex order"),
            click.option("--multiply", type=int, default=None, help="Uniform edge multiplication before computing"),
            click.option("--json", "as_json", is_flag=True, help="Machine readable output"),
            click.option("--out", type=click.Path(dir_okay=False), default=None, help="Also write the output here"),
        ]
        if need_theta:
            options.append(click.option("--theta", required=True, help="Stability t1,t2,... in vertex order"))
        for option in reversed(options):
            f = option(f)
        return f
    return decorate


def load(quiver_path, dim, multiply):
    Q = parse_quiver(quiver_path)
    if multiply is not None:
        Q = multiply_edges(Q, multiply)
    alpha = Q.dim_vector(parse_vector(dim, "dim"), allow_zero=False) if dim is not None else None
    return Q, alpha


def emit(doc, text, as_json, out):
    """Print JSON or the rendered text, and mirror it into --out"""
    payload = json.dumps(doc, indent=2) if as_json else text
    click.echo(payload)
    if out:
        Path(out).write_text(payload + "\n", encoding="utf-8")
        if not as_json:
            click.echo(f"✅ Written to {out}", err=True)


def table(rows, columns=None):
    if not rows:
        return "(none)"
    # object dtype keeps ints as ints when a column also holds missing values
    frame = pd.DataFrame([["-" if v is None else v for v in row] for row in rows], columns=columns, dtype=object)
    return frame.to_string(index=False)


def polynomial_text(p):
    return ep.render(p)


@click.group()
@click.option("--log-level", default=None, help=f"Logging level (default ${config.LOG_LEVEL_ENV} or WARNING)")
@reports_errors
def cli(log_level):
    """Kac polynomials, Hua's formula and HN strata of quiver moment maps"""
    config.setup_logging(log_level)


@cli.command()
@quiver_options()
@reports_errors
def kac(quiver_path, dim, multiply, as_json, out):
    """Kac polynomial via Hua's formula"""
    Q, alpha = load(quiver_path, dim, multiply)
    result = kac_polynomial(Q, alpha)
    doc = result.to_dict()
    doc["terms"] = doc["polynomial"]["terms"]
    doc["tits_hypothesis"] = thm_2_5_hypothesis(Q, alpha)
    text = "\n".join([
        f"A_{alpha}(q) = {polynomial_text(result.polynomial)}",
        table([[e, str(c)] for e, c in result.polynomial.terms], ["exponent", "coefficient"]),
        f"root class: {result.root_class.value}   expected degree: {result.expected_degree}",
        f"{'✅' if result.kac_theorem_ok else '❌'} degree / monic / nonnegativity check",
    ])
    emit(doc, text, as_json, out)


@cli.command("hn-types")
@quiver_options(need_theta=True)
@reports_errors
def hn_types(quiver_path, dim, multiply, as_json, out, theta):
    """Asymptotic HN types of weight alpha"""
    Q, alpha = load(quiver_path, dim, multiply)
    theta = parse_vector(theta, "theta")
    types = enumerate_hn_types(Q, alpha, theta)
    doc = {
        "alpha": list(alpha),
        "theta": list(theta),
        "types": [[list(p) for p in d.parts] for d in types],
    }
    rows = [[str(d), ", ".join(str(slope(theta, p)) for p in d.parts)] for d in types]
    emit(doc, table(rows, ["hn_type", "slopes"]), as_json, out)


@cli.command()
@quiver_options(need_theta=True)
@reports_errors
def strata(quiver_path, dim, multiply, as_json, out, theta):
    """Strata data for every HN type"""
    Q, alpha = load(quiver_path, dim, multiply)
    report = strata_report(Q, alpha, parse_vector(theta, "theta"))
    columns = ["hn_type", "epsilon", "threshold", "threshold_met", "codim_rep",
               "codim_moment", "codim_gap", "dim_T", "constant_C"]
    rows = [[getattr(r, c) for c in columns] for r in report.rows]
    for row in rows:
        if row[2] is None:
            row[2] = "undefined"
    text = "\n".join([
        f"dim Rep = {report.dim_rep}   dim mu^-1(0) = {report.dim_mu_zero}   generic theta: {report.generic}",
        f"root decomposition hypothesis: {report.tits_hypothesis}",
        table(rows, columns),
    ])
    emit(report.to_dict(), text, as_json, out)


@cli.command()
@quiver_options(need_theta=True)
@reports_errors
def decompose(quiver_path, dim, multiply, as_json, out, theta):
    """Hua's formula grouped into HN and slope-tie buckets"""
    Q, alpha = load(quiver_path, dim, multiply)
    report = stratified_decomposition(Q, alpha, parse_vector(theta, "theta"))
    rows = [
        [str(b.key), b.degree, b.codim_moment, b.epsilon, b.threshold_met, b.thm_6_7, polynomial_text(b.polynomial)]
        for b in report.buckets
    ]
    text = "\n".join([
        f"l(alpha) = {report.l_alpha}   terms = {report.term_count}   generic theta: {report.generic}",
        table(rows, ["bucket", "degree", "codim_moment", "epsilon", "threshold_met", "degree_check", "polynomial"]),
        f"A_{alpha}(q) = {polynomial_text(report.kac)}",
    ])
    emit(report.to_dict(), text, as_json, out)


@cli.command("verify-6-7")
@quiver_options(need_theta=True)
@reports_errors
def verify_6_7(quiver_path, dim, multiply, as_json, out, theta):
    """Degree drop of each HN bucket against the moment-map codimension"""
    Q, alpha = load(quiver_path, dim, multiply)
    report = verify_thm_6_7(Q, alpha, parse_vector(theta, "theta"))
    rows = [vars(r) for r in report.rows]
    status = "✅ all buckets at threshold agree" if report.passed_at_threshold else "❌ a bucket at threshold disagrees"
    if report.passed_at_threshold and not report.all_passed:
        status += " (⚠️ some buckets below threshold differ)"
    emit(report.to_dict(), table(rows) + "\n" + status, as_json, out)


@cli.command("verify-6-8")
@quiver_options(need_theta=True)
@click.option("--n1", type=int, required=True)
@click.option("--n2", type=int, required=True)
@reports_errors
def verify_6_8(quiver_path, dim, multiply, as_json, out, theta, n1, n2):
    """Shifted bucket polynomials compared between two edge multiplicities"""
    Q, alpha = load(quiver_path, dim, multiply)
    report = verify_thm_6_8_shift(Q, alpha, parse_vector(theta, "theta"), n1, n2)
    rows = [[r.key, r.status, polynomial_text(r.normalized_1), polynomial_text(r.normalized_2)] for r in report.rows]
    text = table(rows, ["bucket", "status", f"shifted (n={n1})", f"shifted (n={n2})"])
    text += "\n" + ("✅ HN buckets independent of n" if report.passed else "❌ an HN bucket depends on n")
    emit(report.to_dict(), text, as_json, out)


@cli.command()
@quiver_options()
@click.option("--n-from", "n_from", type=int, required=True)
@click.option("--n-to", "n_to", type=int, required=True)
@click.option("--k", type=int, required=True, help="Number of coefficients beyond the first")
@reports_errors
def stabilize(quiver_path, dim, multiply, as_json, out, n_from, n_to, k):
    """Low and top coefficients of A for a range of edge multiplicities"""
    Q, alpha = load(quiver_path, dim, multiply)
    report = stabilization_study(Q, alpha, n_from, n_to, k)
    rows = [[n, lo, hi] for n, lo, hi in zip(report.ns, report.low, report.top)]
    text = "\n".join([
        table(rows, ["n", "low", "top"]),
        f"low stable from n = {report.low_stable_from}   top stable from n = {report.top_stable_from}",
    ])
    emit(report.to_dict(), text, as_json, out)


@cli.command()
@quiver_options()
@click.option("--q", "q", type=int, required=True, help="Field size, one of 2, 3, 5")
@reports_errors
def oracle(quiver_path, dim, multiply, as_json, out, q):
    """Brute-force absolutely indecomposable count compared with A(q)"""
    Q, alpha = load(quiver_path, dim, multiply)
    check = check_against_engine(Q, alpha, q)
    c = check.count
    text = "\n".join([
        table([[c.q, c.total_reps, c.orbit_count, c.abs_indec_count, str(check.engine_eval)]],
              ["q", "total_reps", "orbits", "abs_indec", "engine_eval"]),
        "✅ pass" if check.passed else "❌ fail",
    ])
    emit(check.to_dict(), text, as_json, out)


@cli.command()
@quiver_options(need_dim=False)
@click.option("--type", "flag_type", required=True, help='Flag blocks "d1;d2;..." each a comma list')
@reports_errors
def s0(quiver_path, dim, multiply, as_json, out, flag_type):
    """Dimension of the flag-compatible commutant"""
    Q, alpha = load(quiver_path, dim, multiply)
    d = flag_type_from_blocks(parse_blocks(flag_type))
    if alpha is not None and d.weight != alpha:
        raise InputError(f"Flag blocks sum to {d.weight}, not {alpha}")
    value = s0_commutant_dim(Q, d)
    doc = {"flag_type": [list(p) for p in d.parts], "epsilon": epsilon(d), "s0_commutant_dim": value}
    emit(doc, table([[str(d), epsilon(d), value]], ["flag_type", "epsilon", "s0_commutant_dim"]), as_json, out)


def main(argv=None):
    """Run the command line; returns through sys.exit with the mapped exit code"""
    return cli.main(args=argv, prog_name="hnkac")


if __name__ == "__main__":
    sys.exit(main())

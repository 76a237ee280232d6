//! Subcommand bodies. Each returns the full standard output and the exit
//! code, so the binary can write the report in one go and tests can call the
//! commands directly.

use std::fmt::Write as _;

use num_bigint::BigInt;

use nullsolve_core::covering::{build_kappa_covering, covers, kappa};
use nullsolve_core::graphs::{
    divisible_subgraph, f_avoiding_mod, f_avoiding_natural, threshold, Graph,
};
use nullsolve_core::lift::solve_explicit_cn;
use nullsolve_core::olson::{f_exact, ppa_instance, ppa_step_cap, solve_olson, Engine};
use nullsolve_core::ppa::{bit_string, default_step_cap, follow_path_with, validate_instance, Node};
use nullsolve_core::{Error, GeneralFormPoly, IntMultiPoly, IntegerValued, ResidueSet};

use crate::formats::{parse_genpoly, parse_graph, parse_olson, ParseError};
use crate::trace::{path_line, step_line};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NO_SOLUTION: i32 = 3;
pub const EXIT_CAP: i32 = 4;

/// Everything a command prints, and how the process should exit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: EXIT_OK }
    }

    /// Appends an `ERROR` line for `err` to whatever was printed so far.
    fn failed(mut stdout: String, err: &Error) -> Self {
        let code = exit_code(err);
        if code == EXIT_NO_SOLUTION {
            stdout.push_str("RESULT no solution\n");
        } else {
            let _ = writeln!(stdout, "ERROR {err}");
        }
        Outcome { stdout, code }
    }

    pub fn usage(message: impl std::fmt::Display) -> Self {
        Outcome { stdout: format!("ERROR {message}\n"), code: EXIT_USAGE }
    }

    fn parse(file: &str, err: &ParseError) -> Self {
        Outcome { stdout: format!("ERROR {file}: {err}\n"), code: EXIT_ERROR }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::NoSolution => EXIT_NO_SOLUTION,
        Error::CapExceeded(_) | Error::StepCapExceeded(_) => EXIT_CAP,
        _ => EXIT_ERROR,
    }
}

fn set_string(items: &[usize]) -> String {
    let items: Vec<String> = items.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(","))
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("`{s}` is not {what}")))
        .collect()
}

/// `kappa --p P --d D --set "b1,b2,…"`.
pub fn kappa_cmd(p: u64, d: u32, set: &str) -> Outcome {
    let values = match parse_list::<i64>(set, "an integer") {
        Ok(values) => values,
        Err(message) => return Outcome::usage(message),
    };
    let b = match ResidueSet::from_integers(p, d, &values) {
        Ok(b) => b,
        Err(err) => return Outcome::failed(String::new(), &err),
    };
    let mut out = String::new();
    let _ = writeln!(out, "RESULT kappa = {}", kappa(&b));
    let family = match build_kappa_covering(&b) {
        Ok(family) => family,
        Err(err) => return Outcome::failed(out, &err),
    };
    let _ = writeln!(
        out,
        "RESULT family: {} polynomials, total degree {}",
        family.polys().len(),
        family.total_degree()
    );
    for (i, h) in family.polys().iter().enumerate() {
        let roots: Vec<String> = h.roots().iter().map(i64::to_string).collect();
        let _ = writeln!(
            out,
            "RESULT h{} roots {} delta {} degree {}",
            i + 1,
            roots.join(","),
            h.delta(),
            h.degree()
        );
    }
    for x in b.iter() {
        let by = family
            .polys()
            .iter()
            .position(|h| h.eval_i64(x as i64) % BigInt::from(p) == BigInt::from(0));
        match by {
            Some(i) => {
                let _ = writeln!(out, "RESULT cover {x} by h{}", i + 1);
            }
            None => {
                let _ = writeln!(out, "RESULT cover {x} by none");
            }
        }
    }
    let ok = covers(&family, &b);
    let _ = writeln!(out, "RESULT covers = {}", if ok { "yes" } else { "no" });
    Outcome { stdout: out, code: if ok { EXIT_OK } else { EXIT_ERROR } }
}

fn trace_walk(poly: &GeneralFormPoly, cap: u64, trace: bool, out: &mut String) -> Result<(u64, usize), Error> {
    let m = poly.m();
    let mut step = 0u64;
    if trace {
        let start = poly.pairing().leftover.clone().map(Node::Term);
        let _ = writeln!(out, "{}", step_line(0, &Node::Leaf, None, start.as_ref(), m));
    }
    let report = follow_path_with(poly, Some(cap), |at, via, to| {
        if trace {
            step += 1;
            let _ = writeln!(out, "{}", step_line(step, at, Some(via), to, m));
        }
    })?;
    if trace {
        let _ = writeln!(out, "{}", path_line(&report.nodes, m));
    }
    Ok((report.solution, report.len()))
}

/// `solve-olson FILE [--engine brute|ppa] [--trace]`.
pub fn solve_olson_cmd(file: &str, text: &str, engine: Engine, trace: bool) -> Outcome {
    let inst = match parse_olson(text) {
        Ok(inst) => inst,
        Err(err) => return Outcome::parse(file, &err),
    };
    let mut out = String::new();
    let solved = match engine {
        Engine::Ppa if trace => ppa_instance(&inst).and_then(|poly| {
            let (s, _) = trace_walk(&poly, ppa_step_cap(&poly), true, &mut out)?;
            let j = nullsolve_core::olson::mask_to_set(s);
            if inst.is_solution(&j) {
                Ok(j)
            } else {
                Err(Error::PreconditionViolated(format!("path ended at {j:?}, not a solution")))
            }
        }),
        _ => solve_olson(&inst, engine),
    };
    let j = match solved {
        Ok(j) => j,
        Err(Error::NoSolution) => {
            out.push_str("RESULT no solution (extremal instance)\n");
            return Outcome { stdout: out, code: EXIT_NO_SOLUTION };
        }
        Err(err) => return Outcome::failed(out, &err),
    };
    let _ = writeln!(out, "RESULT J = {}", set_string(&j));
    for (i, r) in inst.residues(&j).iter().enumerate() {
        let _ = writeln!(
            out,
            "RESULT row {}: residue {r} mod {} in Q{} = {}",
            i + 1,
            inst.modulus(i),
            i + 1,
            inst.q()[i]
        );
    }
    Outcome::ok(out)
}

fn degree_lines(g: &Graph, subset: &[usize], out: &mut String) {
    for (v, deg) in g.degrees(subset).iter().enumerate() {
        let _ = writeln!(out, "RESULT degree v{} = {deg}", v + 1);
    }
}

/// `divisible-subgraph FILE --d D [--engine brute|ppa]`.
pub fn divisible_subgraph_cmd(file: &str, text: &str, d: u32, engine: Engine) -> Outcome {
    let g = match parse_graph(text) {
        Ok(g) => g,
        Err(err) => return Outcome::parse(file, &err),
    };
    let mut out = String::new();
    if (1..32).contains(&d) {
        let _ = writeln!(out, "RESULT threshold = {}", threshold(g.n() as u64, 2, d));
    }
    match divisible_subgraph(&g, d, engine) {
        Ok(f) => {
            let _ = writeln!(out, "RESULT F = {}", set_string(&f));
            degree_lines(&g, &f, &mut out);
            Outcome::ok(out)
        }
        Err(err) => Outcome::failed(out, &err),
    }
}

/// How forbidden degrees are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Avoid {
    /// Residues modulo `p^d`.
    Mod { p: u64, d: u32 },
    /// Natural numbers.
    Natural,
}

/// Parses `P^D`.
pub fn parse_prime_power(text: &str) -> Result<(u64, u32), String> {
    let (p, d) = text.split_once('^').ok_or_else(|| format!("`{text}` is not of the form P^D"))?;
    let p = p.trim().parse().map_err(|_| format!("`{p}` is not a prime"))?;
    let d = d.trim().parse().map_err(|_| format!("`{d}` is not an exponent"))?;
    Ok((p, d))
}

/// Parses repeated `v:a,b,…` specifications into per-vertex lists.
pub fn parse_forbid(specs: &[String], n: usize) -> Result<Vec<Vec<i64>>, String> {
    let mut sets = vec![Vec::new(); n];
    for spec in specs {
        let (v, values) = spec
            .split_once(':')
            .ok_or_else(|| format!("`{spec}` is not of the form v:a,b,..."))?;
        let v: usize = v.trim().parse().map_err(|_| format!("`{v}` is not a vertex"))?;
        if !(1..=n).contains(&v) {
            return Err(format!("vertex {v} outside 1..={n}"));
        }
        sets[v - 1].extend(parse_list::<i64>(values, "an integer")?);
    }
    Ok(sets)
}

/// `f-avoiding FILE (--mod P^D | --natural) [--forbid v:a,b …]`.
pub fn f_avoiding_cmd(file: &str, text: &str, avoid: Avoid, forbid: &[String], engine: Engine) -> Outcome {
    let g = match parse_graph(text) {
        Ok(g) => g,
        Err(err) => return Outcome::parse(file, &err),
    };
    let lists = match parse_forbid(forbid, g.n()) {
        Ok(lists) => lists,
        Err(message) => return Outcome::usage(message),
    };
    let solved = match avoid {
        Avoid::Mod { p, d } => lists
            .iter()
            .map(|values| ResidueSet::from_integers(p, d, values))
            .collect::<Result<Vec<_>, _>>()
            .and_then(|sets| f_avoiding_mod(&g, &sets, p, d, engine)),
        Avoid::Natural => {
            if lists.iter().flatten().any(|&x| x < 0) {
                return Outcome::usage("forbidden degrees must be nonnegative with --natural");
            }
            let lists: Vec<Vec<u64>> =
                lists.iter().map(|l| l.iter().map(|&x| x as u64).collect()).collect();
            f_avoiding_natural(&g, &lists, engine)
        }
    };
    match solved {
        Ok(e) => {
            let mut out = format!("RESULT E' = {}\n", set_string(&e));
            degree_lines(&g, &e, &mut out);
            Outcome::ok(out)
        }
        Err(err) => Outcome::failed(String::new(), &err),
    }
}

/// `ppa-run FILE [--trace] [--step-cap N]`.
pub fn ppa_run_cmd(file: &str, text: &str, trace: bool, step_cap: Option<u64>) -> Outcome {
    let poly = match parse_genpoly(text) {
        Ok(poly) => poly,
        Err(err) => return Outcome::parse(file, &err),
    };
    if let Err(cert) = validate_instance(&poly) {
        return Outcome {
            stdout: format!("ERROR invalid instance: {cert}\n"),
            code: EXIT_ERROR,
        };
    }
    let mut out = String::new();
    let cap = step_cap.unwrap_or_else(|| default_step_cap(poly.m()));
    match trace_walk(&poly, cap, trace, &mut out) {
        Ok((s, len)) => {
            let _ = writeln!(
                out,
                "RESULT s = {}, f(s) = {}, path length {len}",
                bit_string(s, poly.m()),
                u8::from(poly.eval(s))
            );
            Outcome::ok(out)
        }
        Err(err) => Outcome::failed(out, &err),
    }
}

/// The polynomial of a genpoly file as an explicit F2 polynomial. A single
/// block holding a single polynomial is taken as listed; anything else is
/// expanded densely.
fn explicit_form(poly: &GeneralFormPoly) -> Result<IntMultiPoly, Error> {
    match poly.blocks() {
        [block] if block.len() == 1 => IntMultiPoly::from_terms(
            poly.m(),
            block[0].monomials().iter().map(|&t| (t, 1.into())),
        )
        .map(|f| f.reduce_mod(2)),
        _ => poly.expand(),
    }
}

/// `explicit-cn FILE`.
pub fn explicit_cn_cmd(file: &str, text: &str) -> Outcome {
    let poly = match parse_genpoly(text) {
        Ok(poly) => poly,
        Err(err) => return Outcome::parse(file, &err),
    };
    let solved = explicit_form(&poly).and_then(|f| solve_explicit_cn(&f));
    match solved {
        Ok(s) => Outcome::ok(format!(
            "RESULT s = {}, f(s) = {}\n",
            bit_string(s, poly.m()),
            u8::from(poly.eval(s))
        )),
        Err(err) => Outcome::failed(String::new(), &err),
    }
}

/// `f-oracle --p P --d "d_1,…" --q "q,…;q,…" --m-cap M`.
pub fn f_oracle_cmd(p: u64, d: &str, q: &str, m_cap: usize) -> Outcome {
    let d = match parse_list::<u32>(d, "an exponent") {
        Ok(d) => d,
        Err(message) => return Outcome::usage(message),
    };
    let lists = match q.split(';').map(|s| parse_list::<i64>(s, "an integer")).collect::<Result<Vec<_>, _>>() {
        Ok(lists) => lists,
        Err(message) => return Outcome::usage(message),
    };
    if lists.len() != d.len() {
        return Outcome::usage(format!("{} exponents but {} target sets", d.len(), lists.len()));
    }
    let sets = match d
        .iter()
        .zip(&lists)
        .map(|(&di, values)| ResidueSet::from_integers(p, di, values))
        .collect::<Result<Vec<_>, _>>()
    {
        Ok(sets) => sets,
        Err(err) => return Outcome::failed(String::new(), &err),
    };
    match f_exact(p, &d, &sets, m_cap) {
        Ok(f) => {
            let bound: u64 = sets.iter().map(|s| kappa(&s.complement())).sum();
            let mut out = format!("RESULT F = {f}\n");
            if f == m_cap {
                out.push_str("RESULT F reached the m-cap; the true value may be larger\n");
            }
            let _ = writeln!(out, "RESULT kappa bound = {bound}");
            Outcome::ok(out)
        }
        Err(err) => Outcome::failed(String::new(), &err),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORKED: &str = "genpoly 2 1\nblock 2\nx1\nx2 + 1\nfullpairs:\nleftover: (1,1,1)\n";

    #[test]
    fn kappa_small() {
        let out = kappa_cmd(2, 2, "1,2,3");
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.starts_with("RESULT kappa = 3\n"));
        assert!(out.stdout.contains("RESULT covers = yes"));
        let out = kappa_cmd(2, 2, "0,1");
        assert_eq!(out.code, EXIT_ERROR);
        assert!(out.stdout.contains("ERROR 0 cannot be covered"));
        assert_eq!(kappa_cmd(2, 2, "1,x").code, EXIT_USAGE);
    }

    #[test]
    fn ppa_run_worked() {
        let out = ppa_run_cmd("worked", WORKED, false, None);
        assert_eq!(out, Outcome::ok("RESULT s = 10, f(s) = 1, path length 4\n".into()));
        let out = ppa_run_cmd("worked", WORKED, true, None);
        assert!(out.stdout.contains("TRACE path w → (1,1,1) → (1,1) → (1,1,2) → (1,0)\n"));
        assert_eq!(crate::trace::replay(&parse_genpoly(WORKED).unwrap(), &out.stdout), Ok(5));
        assert_eq!(ppa_run_cmd("worked", WORKED, false, Some(2)).code, EXIT_CAP);
    }

    #[test]
    fn solve_extremal() {
        let out = solve_olson_cmd("x", "olson 2 1 3\nd: 2\nQ1: 0\n3 3 3\n", Engine::Brute, false);
        assert_eq!(out.code, EXIT_NO_SOLUTION);
        assert_eq!(out.stdout, "RESULT no solution (extremal instance)\n");
        let out = solve_olson_cmd("x", "olson 2 1 4\nd: 2\nQ1: 0\n1 1 1 1\n", Engine::Ppa, true);
        assert_eq!(out.code, EXIT_OK);
        assert!(out.stdout.contains("RESULT J = {1,2,3,4}\n"));
        assert!(out.stdout.contains("TRACE path w → "));
    }

    #[test]
    fn graph_commands() {
        let triangle = "graph 3 3\n1 2\n2 3\n1 3\n";
        let out = divisible_subgraph_cmd("t", triangle, 1, Engine::Ppa);
        assert!(out.stdout.contains("RESULT F = {1,2,3}\n"));
        let path = "graph 3 2\n1 2\n2 3\n";
        assert_eq!(divisible_subgraph_cmd("p", path, 1, Engine::Brute).code, EXIT_ERROR);
        let star = "graph 4 3\n1 2\n1 3\n1 4\n";
        let out = f_avoiding_cmd("s", star, Avoid::Mod { p: 2, d: 1 }, &["1:1".into()], Engine::Brute);
        assert_eq!(out.stdout.lines().next(), Some("RESULT E' = {1,2}"));
        let out = f_avoiding_cmd("s", star, Avoid::Natural, &["1:1".into()], Engine::Brute);
        assert_eq!(out.code, EXIT_OK);
        assert_eq!(
            f_avoiding_cmd("s", star, Avoid::Natural, &["9:1".into()], Engine::Brute).code,
            EXIT_USAGE
        );
    }

    #[test]
    fn oracle_and_explicit() {
        assert_eq!(f_oracle_cmd(2, "2", "0", 10).stdout, "RESULT F = 3\nRESULT kappa bound = 3\n");
        assert_eq!(f_oracle_cmd(2, "2", "0,2", 10).stdout, "RESULT F = 1\nRESULT kappa bound = 1\n");
        let out = explicit_cn_cmd("e", "genpoly 2 1\nblock 1\nx1*x2 + x1\nfullpairs:\nleftover: (1,1)\n");
        assert_eq!(out.stdout, "RESULT s = 10, f(s) = 1\n");
        let out = explicit_cn_cmd("e", "genpoly 2 1\nblock 1\nx1\nfullpairs:\n");
        assert_eq!(out.code, EXIT_ERROR);
    }
}

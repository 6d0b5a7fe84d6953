//! The subcommands.

use std::fs;
use std::io::Write;

use num_traits::Zero;
use serde_json::{json, Value};
use stochmat_core::enumerate::{enumerate_table, golden_table, table_checksums};
use stochmat_core::moments::{
    exact_moment_with, laurent_coefficients, reconstruct_moment, Ensemble, MomentSpec, Params, Quantity, Variant,
};
use stochmat_core::symmfunc::{partitions, ExactRational};
use stochmat_core::weingarten::{symbolic, weingarten_table, Dimension, Family};
use stochmat_mc::sampler::EnsembleSpec;
use stochmat_mc::spectra::{sample_spectra, summarize, Histogram};

use crate::args::{
    AsymptoticsArgs, Command, ExactArgs, Format, QuantityKind, SampleArgs, TablesArgs, VariantFlags, VerifyArgs,
    WeingartenArgs,
};
use crate::error::{CliError, Result};
use crate::output::{rational_function_json, rational_json, to_f64, write_json, writer, RunInfo};
use crate::verify;

/// Runs one command, writing its output.
pub fn run(command: &Command) -> Result<()> {
    match command {
        Command::Sample(a) => cmd_sample(a),
        Command::ExactMoment(a) => cmd_exact(a),
        Command::Tables(a) => cmd_tables(a),
        Command::Weingarten(a) => cmd_weingarten(a),
        Command::Asymptotics(a) => cmd_asymptotics(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn parse_rational(s: &str, what: &str) -> Result<ExactRational> {
    s.trim().parse::<ExactRational>().map_err(|_| config(format!("{what} `{s}` is not a rational number")))
}

fn variant_of(flags: &VariantFlags) -> Variant {
    if flags.full {
        Variant::Full
    } else if flags.shifted {
        Variant::Shifted
    } else {
        Variant::Reduced
    }
}

/// `(a, b)` from any two of `a`, `b`, `N`.
fn signature(dim: Option<u64>, a: Option<u64>, b: Option<u64>) -> Result<(u64, u64)> {
    match (dim, a, b) {
        (Some(n), Some(a), Some(b)) if a + b != n => Err(config(format!("a + b = {} but N = {n}", a + b))),
        (_, Some(a), Some(b)) => Ok((a, b)),
        (Some(n), Some(a), None) if a <= n => Ok((a, n - a)),
        (Some(n), None, Some(b)) if b <= n => Ok((n - b, b)),
        (Some(n), _, _) => Err(config(format!("the signature must satisfy 0 ≤ a, b ≤ N = {n}"))),
        _ => Err(config("chiral ensembles need two of --dim, --a, --b")),
    }
}

pub fn ensemble_spec(args: &SampleArgs) -> Result<EnsembleSpec> {
    let spec = if args.ensemble.chiral() {
        let (a, b) = signature(Some(args.dim as u64), args.a.map(|x| x as u64), args.b.map(|x| x as u64))?;
        EnsembleSpec::chiral(args.ensemble, a as usize, b as usize)?
    } else {
        if args.a.is_some() || args.b.is_some() {
            return Err(config(format!("{} takes no signature", args.ensemble)));
        }
        EnsembleSpec::new(args.ensemble, args.dim)?
    };
    Ok(spec.with_seed(args.seed, args.stream))
}

fn cmd_sample(args: &SampleArgs) -> Result<()> {
    let spec = ensemble_spec(args)?;
    let samples = sample_spectra(&spec, 0, args.count)?;
    let run = RunInfo::new("sample", args);
    let symmetric = spec.family.symmetric();
    let hist_values: Vec<f64> = samples
        .iter()
        .flat_map(|s| if symmetric { s.eigenvalues.iter().map(|z| z.re).collect() } else { s.singular_values.clone() })
        .collect();
    let histogram = || Histogram::new(&hist_values, args.bins);
    match args.format {
        Format::Json => {
            let mut w = writer(args.out.as_deref())?;
            for s in &samples {
                let m = stochmat_mc::sampler::sample(&spec, s.index);
                let entries = &m.stochastic.entries;
                let k = entries.nrows();
                let row_dev = (0..k).map(|i| (entries.row(i).sum() - 1.0).abs()).fold(0.0, f64::max);
                let col_dev = (0..k).map(|i| (entries.column(i).sum() - 1.0).abs()).fold(0.0, f64::max);
                let mut record = json!({
                    "run": run,
                    "family": spec.family,
                    "N": spec.n,
                    "side": spec.side(),
                    "a": spec.a,
                    "b": spec.b,
                    "alpha": spec.alpha(),
                    "seed": spec.seed,
                    "stream": spec.stream,
                    "index": s.index,
                    "eigenvalues": serde_json::to_value(s)?["eigenvalues"].take(),
                    "singular_values": s.singular_values,
                    "pf_removed": s.pf_removed,
                    "pf_residual": s.pf_residual,
                    "flagged": s.flagged,
                    "checks": {
                        "unitarity": m.stochastic.source_unitarity_residual,
                        "row_sum_dev": row_dev,
                        "col_sum_dev": col_dev,
                    },
                });
                if args.matrix {
                    let rows: Vec<Vec<f64>> = (0..k).map(|i| entries.row(i).iter().copied().collect()).collect();
                    record["matrix"] = json!(rows);
                }
                serde_json::to_writer(&mut w, &record)?;
                writeln!(w)?;
            }
            w.flush()?;
        }
        Format::Csv => {
            let mut w = writer(args.out.as_deref())?;
            w.write_all(histogram()?.to_csv().as_bytes())?;
            w.flush()?;
        }
    }
    if let Some(path) = &args.histogram {
        fs::write(path, histogram()?.to_csv())?;
    }
    if let Some(path) = &args.summary {
        let summary = summarize(&spec, &samples, args.max_order, args.bins)?;
        write_json(Some(path), &json!({ "run": run, "summary": summary }))?;
    }
    Ok(())
}

fn quantity(kind: QuantityKind, n: usize) -> Quantity {
    match kind {
        QuantityKind::Trace => Quantity::Trace(n),
        QuantityKind::Singular => Quantity::Singular(n),
    }
}

fn quantity_json(q: Quantity) -> Value {
    match q {
        Quantity::Trace(n) => json!({ "kind": "trace", "n": n }),
        Quantity::Singular(n) => json!({ "kind": "singular", "n": n }),
    }
}

fn require_json(format: Format) -> Result<()> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(config("CSV output is only available for histograms and tables")),
    }
}

/// `α` for a symbolic chiral computation: `--alpha`, or `(a − b)/(a + b)`.
fn ray_alpha(e: Ensemble, alpha: Option<&str>, a: Option<u64>, b: Option<u64>) -> Result<Option<ExactRational>> {
    if !e.chiral() {
        if alpha.is_some() {
            return Err(config(format!("{e} takes no α")));
        }
        return Ok(None);
    }
    let al = match (alpha, a, b) {
        (Some(s), _, _) => parse_rational(s, "α")?,
        (None, Some(a), Some(b)) if a + b > 0 => Params::Signature { a, b }.alpha(),
        _ => return Err(config("symbolic chiral moments need --alpha or --a and --b")),
    };
    if al.clone() * al.clone() > ExactRational::from_integer(1.into()) {
        return Err(config(format!("α = {al} lies outside [−1, 1]")));
    }
    Ok(Some(al))
}

fn cmd_exact(args: &ExactArgs) -> Result<()> {
    require_json(args.format)?;
    let q = if args.singular { Quantity::Singular(args.n) } else { Quantity::Trace(args.n) };
    let variant = variant_of(&args.variant);
    let run = RunInfo::new("exact-moment", args);
    let e = args.ensemble;
    let out = if args.symbolic {
        let alpha = ray_alpha(e, args.alpha.as_deref(), args.a, args.b)?;
        let f = reconstruct_moment(e, q, variant, alpha.as_ref(), args.budget)?;
        json!({
            "run": run,
            "ensemble": e,
            "quantity": quantity_json(q),
            "variant": variant.to_string(),
            "alpha": alpha.as_ref().map(rational_json),
            "moment": rational_function_json(&f),
        })
    } else {
        let params = if e.chiral() {
            let dim = args.dim.as_deref().map(|s| s.parse::<u64>()).transpose().map_err(|_| config("--dim must be an integer"))?;
            let (a, b) = signature(dim, args.a, args.b)?;
            Params::Signature { a, b }
        } else {
            let dim = args.dim.as_deref().ok_or_else(|| config(format!("{e} needs --dim (or --symbolic)")))?;
            Params::N(parse_rational(dim, "N")?)
        };
        let spec = MomentSpec::new(e, q, variant, params.clone())?;
        let v = exact_moment_with(&spec, args.budget)?;
        json!({
            "run": run,
            "ensemble": e,
            "quantity": quantity_json(q),
            "variant": variant.to_string(),
            "params": params.to_string(),
            "value": rational_json(&v.value),
            "approx": to_f64(&v.value),
            "tables": v.tables,
            "weingarten": v.weingarten.iter().map(|(f, l, w)| json!({ "family": f, "class": l, "value": rational_json(w) })).collect::<Vec<_>>(),
        })
    };
    write_json(args.out.as_deref(), &out)?;
    Ok(())
}

fn cmd_tables(args: &TablesArgs) -> Result<()> {
    let t = enumerate_table(args.family, args.n, args.budget)?;
    let checksums = table_checksums(&t);
    let matrix = t.matrix();
    let golden = golden_table(args.family, args.n);
    let golden_status = match &golden {
        None => "absent",
        Some(g) if *g == matrix => "match",
        Some(_) => "mismatch",
    };
    match args.format {
        Format::Json => {
            let rows: Vec<Value> = t
                .row_labels()
                .into_iter()
                .zip(&matrix)
                .map(|(label, cells)| json!({ "label": label, "cells": cells }))
                .collect();
            let out = json!({
                "run": RunInfo::new("tables", args),
                "family": args.family,
                "n": args.n,
                "columns": t.columns,
                "rows": rows,
                "total": t.total().to_string(),
                "checksums": match &checksums {
                    Ok(r) => json!({ "ok": true, "total": r.total.to_string(), "expected_total": r.expected_total.to_string() }),
                    Err(e) => json!({ "ok": false, "error": e.to_string() }),
                },
                "golden": golden_status,
            });
            write_json(args.out.as_deref(), &out)?;
        }
        Format::Csv => {
            let mut w = writer(args.out.as_deref())?;
            let header: Vec<String> = t.columns.iter().map(|c| format!("\"{c}\"")).collect();
            writeln!(w, "row,{}", header.join(","))?;
            for (label, cells) in t.row_labels().into_iter().zip(&matrix) {
                let cells: Vec<String> = cells.iter().map(|c| c.to_string()).collect();
                writeln!(w, "\"{label}\",{}", cells.join(","))?;
            }
            w.flush()?;
        }
    }
    checksums?;
    if golden_status == "mismatch" {
        return Err(CliError::Check(format!("{}_{} differs from the stored table", args.family, args.n)));
    }
    Ok(())
}

fn cmd_weingarten(args: &WeingartenArgs) -> Result<()> {
    require_json(args.format)?;
    let run = RunInfo::new("weingarten", args);
    let fam = args.family;
    let out = if args.symbolic {
        let entries: Vec<Value> = if fam.chiral() {
            let al = match &args.alpha {
                Some(s) => parse_rational(s, "α")?,
                None => return Err(config("symbolic chiral Weingarten functions need --alpha")),
            };
            partitions(args.n)
                .into_iter()
                .map(|l| {
                    let f = if fam == Family::AIII { symbolic::wg_aiii_ray(&l, &al) } else { symbolic::wg_bdi_ray(&l, &al) };
                    json!({ "class": l, "function": rational_function_json(&f) })
                })
                .collect()
        } else {
            partitions(args.n)
                .into_iter()
                .map(|l| {
                    let f = match fam {
                        Family::U => symbolic::wg_u(&l),
                        Family::O => symbolic::wg_o(&l),
                        Family::Sp => symbolic::wg_sp_class(&l),
                        Family::AI => symbolic::wg_ai(&l),
                        _ => symbolic::wg_aii_class(&l),
                    };
                    json!({ "class": l, "function": rational_function_json(&f) })
                })
                .collect()
        };
        json!({ "run": run, "family": fam, "order": args.n, "entries": entries })
    } else {
        let dimension = if fam.chiral() {
            let dim = args.dim.as_deref().map(|s| s.parse::<u64>()).transpose().map_err(|_| config("--dim must be an integer"))?;
            let (a, b) = signature(dim, args.a, args.b)?;
            Dimension::Signature { a, b }
        } else {
            let dim = args.dim.as_deref().ok_or_else(|| config(format!("{fam} needs --dim (or --symbolic)")))?;
            Dimension::N(parse_rational(dim, "N")?)
        };
        let t = weingarten_table(fam, args.n, dimension.clone())?;
        let entries: Vec<Value> = t
            .entries
            .iter()
            .map(|(l, v)| json!({ "class": l, "value": rational_json(v), "approx": to_f64(v) }))
            .collect();
        json!({ "run": run, "family": fam, "order": args.n, "dimension": dimension.to_string(), "entries": entries })
    };
    write_json(args.out.as_deref(), &out)?;
    Ok(())
}

fn cmd_asymptotics(args: &AsymptoticsArgs) -> Result<()> {
    require_json(args.format)?;
    let q = quantity(args.quantity, args.n);
    let variant = variant_of(&args.variant);
    let alpha = ray_alpha(args.ensemble, args.alpha.as_deref(), None, None)?;
    let f = reconstruct_moment(args.ensemble, q, variant, alpha.as_ref(), args.budget)?;
    let count = args.count.unwrap_or(2 * args.n);
    let t = laurent_coefficients(&f, args.n, count);
    let leading = t.iter().position(|c| !c.is_zero()).map(|i| i + 1);
    let coefficients: Vec<Value> = t
        .iter()
        .enumerate()
        .map(|(i, c)| json!({ "j": i + 1, "value": rational_json(c), "approx": to_f64(c) }))
        .collect();
    let out = json!({
        "run": RunInfo::new("asymptotics", args),
        "ensemble": args.ensemble,
        "quantity": quantity_json(q),
        "variant": variant.to_string(),
        "alpha": alpha.as_ref().map(rational_json),
        "moment": rational_function_json(&f),
        "convention": "moment/N = sum over j of T_{n,j} N^{n-j}",
        "first_nonzero_j": leading,
        "coefficients": coefficients,
    });
    write_json(args.out.as_deref(), &out)?;
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<()> {
    let opts = verify::Options { quick: args.quick, only: args.only.clone(), seed: args.seed, budget: args.budget };
    let reports = verify::run(&opts, |r| {
        for line in r.lines() {
            println!("{line}");
        }
    });
    if let Some(path) = &args.out {
        write_json(Some(path), &json!({ "run": RunInfo::new("verify", args), "criteria": reports }))?;
    }
    let failed: Vec<String> = reports.iter().filter(|r| !r.passed()).map(|r| r.id.to_string()).collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(format!("criteria {} failed", failed.join(", "))))
    }
}

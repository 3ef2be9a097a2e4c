//! Command implementations.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};

use serde_json::json;

use paoneshot_core::estimate::report::{EstimateDocument, FitDocument};
use paoneshot_core::estimate::{
    estimate_baseline, estimate_mle_full, estimate_oneshot, estimate_oneshot_binned,
    estimate_pt_window, AttachmentEstimate, BinningScheme, MleOptions, OneshotConfig,
};
use paoneshot_core::fit::{fit_alpha, fit_beta, fit_gamma, FitResult};
use paoneshot_core::net::{
    read_edge_list, read_event_file, read_timed_edge_list, read_trace_file, write_event_file,
    write_timed_edge_list, write_trace_file, EventSequence, GrowthTrace, Snapshot,
};
use paoneshot_core::sim::{
    derive_seed, hat_p, simulate as run_growth, AttachmentFunction, SGConfig, Schedule,
};
use paoneshot_core::{diagnostics, Error};

use crate::args::{
    AttachmentArgs, DiagnoseArgs, EstimateArgs, FitArgs, FitFormArg, FitInputKind, Format,
    InputKind, Method, SequenceKind, SimulateArgs, Tool,
};
use crate::CliError;

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn open_input(path: &str) -> CliResult<Box<dyn BufRead>> {
    if path == "-" {
        Ok(Box::new(BufReader::new(std::io::stdin())))
    } else {
        Ok(Box::new(BufReader::new(File::open(path)?)))
    }
}

fn read_to_string(path: &str) -> CliResult<String> {
    let mut content = String::new();
    open_input(path)?.read_to_string(&mut content)?;
    Ok(content)
}

fn open_output(path: &str) -> CliResult<Box<dyn Write>> {
    if path == "-" {
        Ok(Box::new(std::io::stdout()))
    } else {
        Ok(Box::new(BufWriter::new(File::create(path)?)))
    }
}

impl AttachmentArgs {
    fn build(&self) -> CliResult<AttachmentFunction> {
        let function = match (self.alpha, self.beta, self.linear) {
            (Some(exponent), None, None) => AttachmentFunction::PowerLaw { exponent },
            (None, Some(damping), None) => AttachmentFunction::LogDamped { damping },
            (None, None, Some(offset)) => AttachmentFunction::Linear { offset },
            _ => {
                return Err(usage(
                    "exactly one of --alpha, --beta, --linear must be given",
                ))
            }
        };
        function.validate()?;
        Ok(function)
    }

    fn describe(&self) -> serde_json::Value {
        match (self.alpha, self.beta, self.linear) {
            (Some(a), _, _) => json!({"form": "power_law", "alpha": a}),
            (_, Some(b), _) => json!({"form": "log_damped", "beta": b}),
            (_, _, Some(c)) => json!({"form": "linear", "c": c}),
            _ => serde_json::Value::Null,
        }
    }
}

/// Insert `.r<i>` before the extension for replicate outputs.
fn replicate_path(path: &str, replicate: usize, replicates: usize) -> CliResult<String> {
    if replicates == 1 {
        return Ok(path.to_string());
    }
    if path == "-" {
        return Err(usage("--replicates > 1 cannot write to standard output"));
    }
    let p = std::path::Path::new(path);
    Ok(match (p.file_stem(), p.extension()) {
        (Some(stem), Some(ext)) => p
            .with_file_name(format!(
                "{}.r{replicate}.{}",
                stem.to_string_lossy(),
                ext.to_string_lossy()
            ))
            .to_string_lossy()
            .into_owned(),
        _ => format!("{path}.r{replicate}"),
    })
}

pub fn simulate(args: &SimulateArgs) -> CliResult<()> {
    let attachment = args.attachment.build()?;
    let sequence = match &args.sequence {
        Some(path) => Some(read_event_file(open_input(path)?)?),
        None => None,
    };
    let steps = match (args.steps, &sequence) {
        (Some(t), _) => t,
        (None, Some(seq)) => seq.len() as u64 + 1,
        (None, None) => return Err(usage("--steps is required unless --sequence is given")),
    };
    let schedule = match (&sequence, args.p) {
        (Some(seq), None) => Schedule::Sequence(seq.clone()),
        (None, Some(p)) => Schedule::Constant(p),
        _ => return Err(usage("exactly one of --p, --sequence must be given")),
    };
    if args.replicates == 0 {
        return Err(usage("--replicates must be at least 1"));
    }
    let default_edges = args.edges_out.is_none()
        && args.trace_out.is_none()
        && args.events_out.is_none();
    let edges_out = args
        .edges_out
        .clone()
        .or_else(|| default_edges.then(|| "-".to_string()));
    let stdout_sinks = [&edges_out, &args.trace_out, &args.events_out]
        .iter()
        .filter(|s| s.as_deref() == Some("-"))
        .count();
    if stdout_sinks > 1 {
        return Err(usage("at most one output may be standard output"));
    }

    for replicate in 0..args.replicates {
        let seed = if args.replicates == 1 {
            args.seed
        } else {
            derive_seed(args.seed, replicate as u64)
        };
        let mut cfg = SGConfig::new(steps, schedule.clone(), seed);
        cfg.record_trace = true;
        let out = run_growth(&cfg, &attachment)?;
        let trace = out.trace.as_ref().expect("trace recorded");
        let echo = json!({
            "command": "simulate",
            "steps": steps,
            "p": args.p,
            "sequence": args.sequence,
            "attachment": args.attachment.describe(),
            "seed": args.seed,
            "replicate": replicate,
            "run_seed": seed,
        });

        if let Some(path) = &edges_out {
            let path = replicate_path(path, replicate, args.replicates)?;
            let mut w = open_output(&path)?;
            writeln!(w, "# {echo}")?;
            write_timed_edge_list(&mut w, trace)?;
        }
        if let Some(path) = &args.trace_out {
            let path = replicate_path(path, replicate, args.replicates)?;
            let mut w = open_output(&path)?;
            writeln!(w, "# {echo}")?;
            write_trace_file(&mut w, trace)?;
        }
        if let Some(path) = &args.events_out {
            let path = replicate_path(path, replicate, args.replicates)?;
            let mut w = open_output(&path)?;
            writeln!(w, "# {echo}")?;
            write_event_file(&mut w, &trace.event_sequence())?;
        }
        eprintln!(
            "simulate: replicate {replicate}: N={}, E={}, hat_p={:.4}",
            out.snapshot.node_count,
            out.snapshot.edge_count,
            hat_p(out.snapshot.node_count, out.snapshot.edge_count)?,
        );
    }
    Ok(())
}

enum LoadedInput {
    Snapshot(Snapshot),
    Trace(GrowthTrace),
}

fn load_graph(path: &str, kind: InputKind) -> CliResult<LoadedInput> {
    let reader = open_input(path)?;
    Ok(match kind {
        InputKind::Edges => LoadedInput::Snapshot(read_edge_list(reader)?),
        InputKind::TimedEdges => LoadedInput::Trace(read_timed_edge_list(reader)?),
        InputKind::Trace => LoadedInput::Trace(read_trace_file(reader)?),
    })
}

impl LoadedInput {
    fn snapshot(&self) -> CliResult<Snapshot> {
        Ok(match self {
            LoadedInput::Snapshot(s) => s.clone(),
            LoadedInput::Trace(t) => t.replay()?,
        })
    }
}

pub fn estimate(args: &EstimateArgs) -> CliResult<()> {
    if args.method == Method::Mle && args.input_kind == InputKind::Edges {
        return Err(usage(
            "method mle needs time-resolved input; use --input-kind timed-edges or trace",
        ));
    }
    let input = load_graph(&args.input, args.input_kind)?;

    let mut echo = json!({
        "command": "estimate",
        "input": args.input,
        "seed": args.seed,
        "normalized": args.normalize,
    });
    let echo_map = echo.as_object_mut().expect("object");
    echo_map.insert(
        "method".into(),
        json!(match args.method {
            Method::Baseline => "baseline",
            Method::Oneshot => "oneshot",
            Method::OneshotBinned => "oneshot-binned",
            Method::Mle => "mle",
        }),
    );

    let mut estimate: AttachmentEstimate = match args.method {
        Method::Baseline => {
            let snapshot = input.snapshot()?;
            estimate_baseline(&snapshot.histogram)
        }
        Method::Oneshot | Method::OneshotBinned => {
            let snapshot = input.snapshot()?;
            let mut cfg = OneshotConfig::new(args.simulations, args.rounds, args.seed);
            cfg.repetitions = args.repetitions;
            cfg.schedule = args.sim_p.map(Schedule::Constant);
            cfg.time_steps = args.sim_steps;
            let sim_p = match args.sim_p {
                Some(p) => p,
                None => hat_p(snapshot.node_count, snapshot.edge_count)?,
            };
            let sim_steps = args
                .sim_steps
                .unwrap_or(snapshot.node_count + snapshot.edge_count - 1);
            echo_map.insert("simulations_per_round".into(), json!(args.simulations));
            echo_map.insert("rounds".into(), json!(args.rounds));
            echo_map.insert("repetitions".into(), json!(args.repetitions));
            echo_map.insert("hat_p".into(), json!(sim_p));
            echo_map.insert("sim_steps".into(), json!(sim_steps));
            if args.method == Method::Oneshot {
                estimate_oneshot(&snapshot, &cfg)?
            } else {
                let max_degree = snapshot.histogram.max_degree().unwrap_or(0);
                let bins = BinningScheme::geometric(max_degree, args.bin_ratio)?;
                echo_map.insert("bin_ratio".into(), json!(args.bin_ratio));
                estimate_oneshot_binned(&snapshot, &cfg, &bins)?
            }
        }
        Method::Mle => {
            let trace = match &input {
                LoadedInput::Trace(t) => t,
                LoadedInput::Snapshot(_) => unreachable!("guarded above"),
            };
            let options = MleOptions {
                tolerance: args.tol,
                max_iterations: args.max_iter,
                collapse_timestamps: args.collapse_timestamps,
                initial: None,
            };
            let result = estimate_mle_full(trace, &options)?;
            echo_map.insert("tolerance".into(), json!(args.tol));
            echo_map.insert("max_iterations".into(), json!(args.max_iter));
            echo_map.insert("iterations".into(), json!(result.iterations));
            echo_map.insert("converged".into(), json!(result.converged));
            echo_map.insert(
                "collapse_timestamps".into(),
                json!(args.collapse_timestamps),
            );
            if !result.converged {
                eprintln!(
                    "estimate: warning: fixed point not converged after {} iterations",
                    result.iterations
                );
            }
            result.estimate
        }
    };
    if args.normalize {
        estimate = estimate.normalized();
    }

    let document = EstimateDocument::new(echo, &estimate);
    let mut writer = open_output(&args.output)?;
    match args.format {
        Format::Csv => document.write_csv(&mut writer)?,
        Format::Json => document.write_json(&mut writer)?,
    }
    writer.flush()?;
    eprintln!(
        "estimate: {} records written to {}",
        document.records.len(),
        args.output
    );
    Ok(())
}

pub fn fit(args: &FitArgs) -> CliResult<()> {
    let mut echo = json!({
        "command": "fit",
        "input": args.input,
    });
    let echo_map = echo.as_object_mut().expect("object");
    let result: FitResult = match args.form {
        FitFormArg::Alpha | FitFormArg::Beta => {
            if args.input_kind != FitInputKind::Estimate {
                return Err(usage(
                    "--form alpha/beta fit an estimate file; use --input-kind estimate",
                ));
            }
            let document = EstimateDocument::read_auto(&read_to_string(&args.input)?)?;
            let estimate = document.estimate();
            if args.form == FitFormArg::Alpha {
                echo_map.insert("form".into(), json!("alpha"));
                echo_map.insert("weighted".into(), json!(args.weighted));
                fit_alpha(&estimate, args.weighted)?
            } else {
                echo_map.insert("form".into(), json!("beta"));
                fit_beta(&estimate)?
            }
        }
        FitFormArg::Gamma => {
            let kind = match args.input_kind {
                FitInputKind::Estimate => {
                    return Err(usage(
                        "--form gamma fits a degree distribution; use --input-kind edges, timed-edges or trace",
                    ))
                }
                FitInputKind::Edges => InputKind::Edges,
                FitInputKind::TimedEdges => InputKind::TimedEdges,
                FitInputKind::Trace => InputKind::Trace,
            };
            let k_min = args
                .k_min
                .ok_or_else(|| usage("--form gamma requires --k-min"))?;
            let snapshot = load_graph(&args.input, kind)?.snapshot()?;
            echo_map.insert("form".into(), json!("gamma"));
            echo_map.insert("k_min".into(), json!(k_min));
            fit_gamma(&snapshot.histogram, k_min)?
        }
    };
    let document = FitDocument::new(echo, result);
    let mut writer = open_output(&args.output)?;
    document.write_json(&mut writer)?;
    writer.flush()?;
    eprintln!(
        "fit: {:?} parameter {:.6} (±{:.6}) from {} points",
        document.fit.form, document.fit.parameter, document.fit.two_sigma, document.fit.points_used
    );
    Ok(())
}

pub fn diagnose(args: &DiagnoseArgs) -> CliResult<()> {
    let mut writer = open_output(&args.output)?;
    match args.tool {
        Tool::Ratio => {
            let attachment = args.attachment.build()?;
            let p = args.p.ok_or_else(|| usage("--tool ratio requires --p"))?;
            let steps = args
                .steps
                .ok_or_else(|| usage("--tool ratio requires --steps"))?;
            let replicates = args.replicates.unwrap_or(100);
            let points = diagnostics::tail_ratio_diagnostic(
                &attachment,
                p,
                steps,
                replicates,
                args.seed,
                args.max_degree,
            )?;
            let echo = json!({
                "command": "diagnose", "tool": "ratio",
                "attachment": args.attachment.describe(),
                "p": p, "steps": steps, "replicates": replicates,
                "seed": args.seed, "max_degree": args.max_degree,
            });
            match args.format {
                Format::Csv => {
                    writeln!(writer, "# {echo}")?;
                    writeln!(writer, "k,mean_tail,mean_count,ratio,normalized")?;
                    for pt in &points {
                        writeln!(
                            writer,
                            "{},{},{},{},{}",
                            pt.degree, pt.mean_tail, pt.mean_count, pt.ratio, pt.normalized
                        )?;
                    }
                }
                Format::Json => {
                    serde_json::to_writer_pretty(
                        &mut writer,
                        &json!({"config": echo, "points": points}),
                    )
                    .map_err(Error::from)?;
                    writeln!(writer)?;
                }
            }
        }
        Tool::Pi => {
            let offset = match (args.c, args.attachment.linear) {
                (Some(c), None) => c,
                (None, Some(c)) => c,
                (None, None) => return Err(usage("--tool pi requires --c (or --linear)")),
                _ => return Err(usage("give the linear offset once, via --c or --linear")),
            };
            let p = args.p.ok_or_else(|| usage("--tool pi requires --p"))?;
            let steps = args
                .steps
                .ok_or_else(|| usage("--tool pi requires --steps"))?;
            let replicates = args.replicates.unwrap_or(20);
            let points = diagnostics::degree_fraction_comparison(
                offset,
                p,
                steps,
                replicates,
                args.seed,
                args.max_degree,
            )?;
            let echo = json!({
                "command": "diagnose", "tool": "pi",
                "c": offset, "p": p, "steps": steps, "replicates": replicates,
                "seed": args.seed, "max_degree": args.max_degree,
            });
            match args.format {
                Format::Csv => {
                    writeln!(writer, "# {echo}")?;
                    writeln!(writer, "k,empirical,predicted,relative_error")?;
                    for pt in &points {
                        writeln!(
                            writer,
                            "{},{},{},{}",
                            pt.degree, pt.empirical, pt.predicted, pt.relative_error
                        )?;
                    }
                }
                Format::Json => {
                    serde_json::to_writer_pretty(
                        &mut writer,
                        &json!({"config": echo, "points": points}),
                    )
                    .map_err(Error::from)?;
                    writeln!(writer)?;
                }
            }
        }
        Tool::Pt => {
            let path = args
                .input
                .as_ref()
                .ok_or_else(|| usage("--tool pt requires --input"))?;
            let sequence: EventSequence = match args.input_kind {
                SequenceKind::Events => read_event_file(open_input(path)?)?,
                SequenceKind::Trace => read_trace_file(open_input(path)?)?.event_sequence(),
            };
            let series = estimate_pt_window(&sequence, args.window)?;
            let echo = json!({
                "command": "diagnose", "tool": "pt",
                "input": path, "window": args.window,
            });
            match args.format {
                Format::Csv => {
                    writeln!(writer, "# {echo}")?;
                    writeln!(writer, "t,p_hat")?;
                    for (i, p) in series.iter().enumerate() {
                        writeln!(writer, "{},{}", i + 1, p)?;
                    }
                }
                Format::Json => {
                    let points: Vec<serde_json::Value> = series
                        .iter()
                        .enumerate()
                        .map(|(i, p)| json!({"t": i + 1, "p_hat": p}))
                        .collect();
                    serde_json::to_writer_pretty(
                        &mut writer,
                        &json!({"config": echo, "points": points}),
                    )
                    .map_err(Error::from)?;
                    writeln!(writer)?;
                }
            }
        }
    }
    writer.flush()?;
    Ok(())
}

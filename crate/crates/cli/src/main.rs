//! `charvar`: classify, reduce, orbit, sample, render, tracepoly and verify
//! subcommands over the trace-coordinate dynamics library.
//!
//! Exit codes: 0 success, 1 usage or precondition error, 2 verification
//! failure.  `CHARVAR_SEED` overrides any `--seed` flag.

use charvar::char_space::{component_of, Character};
use charvar::dynamics::{orbit, sample_level_set_workers, OrbitPolicy, SampleRun, Window};
use charvar::modular_group::GeneratorId;
use charvar::reduction::reduce;
use charvar::render::{
    render_density_ppm, render_level_contour, Canvas, ContourOptions, Plane,
};
use charvar::scalar::{Mode, Scalar};
use charvar::trace_calculus::{FreeWord, TraceCalculator};
use charvar::verify::{run_all, run_suite, Suite, SuiteReport};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "charvar",
    version,
    about = "Dynamics of the automorphism group of x^2 + y^2 + z^2 - xyz - 2 on real trace coordinates",
    allow_negative_numbers = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct PointArgs {
    /// Coordinate as a decimal or "p/q" rational.
    #[arg(allow_hyphen_values = true)]
    x: String,
    #[arg(allow_hyphen_values = true)]
    y: String,
    #[arg(allow_hyphen_values = true)]
    z: String,
    /// Arithmetic mode: exact | float.
    #[arg(long, default_value = "exact")]
    mode: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate kappa and the level-set component of a point.
    Classify(PointArgs),
    /// Run the trace-reduction normal form (kappa > 2 required).
    Reduce(PointArgs),
    /// Iterate the group action and dump the orbit.
    Orbit {
        /// Level value used to sample a start when --start is absent.
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        #[arg(long, default_value_t = 1000)]
        steps: u64,
        /// uniform | `reduced:<len>` | `cycle:<Gen,Gen,...>`
        #[arg(long, default_value = "uniform")]
        policy: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Starting point "x,y,z" (decimals, or rationals in exact mode).
        #[arg(long, allow_hyphen_values = true)]
        start: Option<String>,
        #[arg(long, default_value = "float")]
        mode: String,
        /// Sampling window: half-extent r, or "x0,x1,y0,y1,z0,z1".
        #[arg(long, default_value = "8", allow_hyphen_values = true)]
        window: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// jsonl | csv
        #[arg(long, default_value = "jsonl")]
        format: String,
        /// Independent orbit strands, merged deterministically.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Draw weighted samples of the invariant measure on a level set.
    Sample {
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 10_000)]
        n: usize,
        /// Half-extent r, or "x0,x1,y0,y1,z0,z1".
        #[arg(long, default_value = "8", allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// jsonl | csv
        #[arg(long, default_value = "jsonl")]
        format: String,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Emit a level-set slice figure (SVG contour or PPM sample density).
    Render {
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// xy | yz | zx
        #[arg(long, default_value = "xy")]
        plane: String,
        /// Value of the frozen third coordinate.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        slice: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// svg (contour) | ppm (sampled density heatmap)
        #[arg(long, default_value = "svg")]
        format: String,
        /// Plane window: half-extent r, or "h0,h1,v0,v1".
        #[arg(long, default_value = "5", allow_hyphen_values = true)]
        window: String,
        #[arg(long, default_value_t = 513)]
        width: u32,
        #[arg(long, default_value_t = 513)]
        height: u32,
        /// Overlay the projection-region boundary (x^2-4)(y^2-4) = 2-t.
        #[arg(long, default_value_t = false)]
        overlay_rt: bool,
        /// Sample count for the ppm density format.
        #[arg(long, default_value_t = 50_000)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the trace polynomial of a free-group word like "X Y^-2 X^3".
    Tracepoly { word: String },
    /// Run the property suites.
    Verify {
        /// all | group | trace | reduction | hyperbolic | dynamics
        #[arg(long, default_value = "all")]
        suite: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage problems exit 1 per the interface contract.
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {}", msg);
            ExitCode::from(1)
        }
    }
}

fn env_seed(cli_seed: u64) -> u64 {
    match std::env::var("CHARVAR_SEED") {
        Ok(v) => v.parse().unwrap_or(cli_seed),
        Err(_) => cli_seed,
    }
}

fn parse_point(args: &PointArgs) -> Result<Character, String> {
    let mode: Mode = args.mode.parse().map_err(|e| format!("{}", e))?;
    let x = Scalar::parse(&args.x, mode).map_err(|e| format!("{}", e))?;
    let y = Scalar::parse(&args.y, mode).map_err(|e| format!("{}", e))?;
    let z = Scalar::parse(&args.z, mode).map_err(|e| format!("{}", e))?;
    Character::new(x, y, z).map_err(|e| format!("{}", e))
}

fn parse_window(spec: &str) -> Result<Window, String> {
    let parts: Vec<&str> = spec.split(',').collect();
    match parts.len() {
        1 => {
            let r: f64 = parts[0].trim().parse().map_err(|_| "bad window")?;
            Ok(Window::cube(r))
        }
        6 => {
            let v: Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse()).collect();
            let v = v.map_err(|_| "bad window")?;
            Ok(Window {
                x: [v[0], v[1]],
                y: [v[2], v[3]],
                z: [v[4], v[5]],
            })
        }
        _ => Err("window must be r or x0,x1,y0,y1,z0,z1".into()),
    }
}

fn parse_plane_window(spec: &str) -> Result<([f64; 2], [f64; 2]), String> {
    let parts: Vec<&str> = spec.split(',').collect();
    match parts.len() {
        1 => {
            let r: f64 = parts[0].trim().parse().map_err(|_| "bad window")?;
            Ok(([-r, r], [-r, r]))
        }
        4 => {
            let v: Result<Vec<f64>, _> = parts.iter().map(|p| p.trim().parse()).collect();
            let v = v.map_err(|_| "bad window")?;
            Ok(([v[0], v[1]], [v[2], v[3]]))
        }
        _ => Err("plane window must be r or h0,h1,v0,v1".into()),
    }
}

fn parse_policy(spec: &str, seed: u64) -> Result<OrbitPolicy, String> {
    if spec == "uniform" {
        return Ok(OrbitPolicy::UniformRandomGenerator { seed });
    }
    if let Some(len) = spec.strip_prefix("reduced:") {
        let length: usize = len.parse().map_err(|_| "bad reduced length")?;
        return Ok(OrbitPolicy::RandomReducedWord { length, seed });
    }
    if let Some(word) = spec.strip_prefix("cycle:") {
        let ids: Result<Vec<GeneratorId>, _> =
            word.split(',').map(|w| GeneratorId::from_str(w.trim())).collect();
        return Ok(OrbitPolicy::FixedWordCycle(ids.map_err(|e| format!("{}", e))?));
    }
    Err(format!(
        "unknown policy `{}` (uniform | reduced:<len> | cycle:<Gen,...>)",
        spec
    ))
}

fn scalar_json(s: &Scalar) -> serde_json::Value {
    match s {
        Scalar::Float(v) => json!(v),
        // Integral values print as numbers, like the interface examples;
        // proper fractions stay "p/q" strings.
        Scalar::Exact(_) => match s.as_integer() {
            Some(n) => json!(n),
            None => json!(s.to_string()),
        },
    }
}

fn write_output(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| format!("{}", e)),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| format!("{}", e)),
    }
}

fn orbit_records(
    start: &Character,
    policy: &OrbitPolicy,
    steps: u64,
    strand: Option<usize>,
) -> Vec<(u64, Character, String, Option<usize>)> {
    let mut rows = vec![(0u64, start.clone(), String::new(), strand)];
    for step in orbit(start, policy, steps) {
        let word = step
            .applied
            .iter()
            .map(|g| g.mnemonic())
            .collect::<Vec<_>>()
            .join(" ");
        rows.push((step.step, step.character, word, strand));
    }
    rows
}

fn dump_rows(
    rows: &[(u64, Character, String, Option<usize>)],
    format: &str,
) -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    match format {
        "jsonl" => {
            for (step, c, word, strand) in rows {
                let mut obj = serde_json::Map::new();
                if let Some(s) = strand {
                    obj.insert("strand".into(), json!(s));
                }
                obj.insert("step".into(), json!(step));
                obj.insert("x".into(), scalar_json(&c.x()));
                obj.insert("y".into(), scalar_json(&c.y()));
                obj.insert("z".into(), scalar_json(&c.z()));
                obj.insert("kappa".into(), scalar_json(&c.kappa()));
                obj.insert("word".into(), json!(word));
                out.extend_from_slice(serde_json::to_string(&obj).unwrap().as_bytes());
                out.push(b'\n');
            }
        }
        "csv" => {
            let has_strand = rows.iter().any(|r| r.3.is_some());
            if has_strand {
                out.extend_from_slice(b"strand,step,x,y,z,kappa,word\n");
            } else {
                out.extend_from_slice(b"step,x,y,z,kappa,word\n");
            }
            for (step, c, word, strand) in rows {
                let mut line = String::new();
                if has_strand {
                    line.push_str(&format!("{},", strand.unwrap_or(0)));
                }
                line.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    step,
                    c.x(),
                    c.y(),
                    c.z(),
                    c.kappa(),
                    word
                ));
                out.extend_from_slice(line.as_bytes());
            }
        }
        other => return Err(format!("unknown format `{}` (jsonl | csv)", other)),
    }
    Ok(out)
}

fn dump_samples(run: &SampleRun, format: &str) -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    match format {
        "jsonl" => {
            for (i, s) in run.samples.iter().enumerate() {
                let c = &s.character;
                let mut obj = serde_json::Map::new();
                obj.insert("step".into(), json!(i));
                obj.insert("x".into(), scalar_json(&c.x()));
                obj.insert("y".into(), scalar_json(&c.y()));
                obj.insert("z".into(), scalar_json(&c.z()));
                obj.insert("kappa".into(), scalar_json(&c.kappa()));
                obj.insert("word".into(), json!(""));
                obj.insert("weight".into(), json!(s.weight));
                out.extend_from_slice(serde_json::to_string(&obj).unwrap().as_bytes());
                out.push(b'\n');
            }
        }
        "csv" => {
            out.extend_from_slice(b"step,x,y,z,kappa,word,weight\n");
            for (i, s) in run.samples.iter().enumerate() {
                let c = &s.character;
                out.extend_from_slice(
                    format!("{},{},{},{},{},,{}\n", i, c.x(), c.y(), c.z(), c.kappa(), s.weight)
                        .as_bytes(),
                );
            }
        }
        other => return Err(format!("unknown format `{}` (jsonl | csv)", other)),
    }
    Ok(out)
}

fn print_reports(reports: &[SuiteReport]) -> bool {
    let mut all_ok = true;
    for report in reports {
        let (pass, fail) = report.counts();
        println!(
            "suite {}: {} checks, {} passed, {} failed",
            report.suite,
            report.checks.len(),
            pass,
            fail
        );
        for c in &report.checks {
            println!(
                "  [{}] {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.details
            );
        }
        all_ok &= report.passed();
    }
    all_ok
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Classify(args) => {
            let c = parse_point(&args)?;
            let out = json!({
                "x": scalar_json(&c.x()),
                "y": scalar_json(&c.y()),
                "z": scalar_json(&c.z()),
                "mode": c.mode().to_string(),
                "kappa": scalar_json(&c.kappa()),
                "component": component_of(&c).to_string(),
            });
            println!("{}", serde_json::to_string(&out).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Reduce(args) => {
            let c = parse_point(&args)?;
            let r = reduce(&c).map_err(|e| format!("{}", e))?;
            let out = json!({
                "input": &c,
                "normal_form": &r.normal_form,
                "word": r.applied.to_string(),
                "steps": r.steps,
                "verdict": r.verdict.to_string(),
            });
            println!("{}", serde_json::to_string(&out).unwrap());
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Orbit {
            t,
            steps,
            policy,
            seed,
            start,
            mode,
            window,
            out,
            format,
            workers,
        } => {
            let seed = env_seed(seed);
            let mode: Mode = mode.parse().map_err(|e| format!("{}", e))?;
            let window = parse_window(&window)?;
            let start_char = match (&start, t) {
                (Some(spec), _) => {
                    let parts: Vec<&str> = spec.split(',').collect();
                    if parts.len() != 3 {
                        return Err("start must be x,y,z".into());
                    }
                    let x = Scalar::parse(parts[0], mode).map_err(|e| format!("{}", e))?;
                    let y = Scalar::parse(parts[1], mode).map_err(|e| format!("{}", e))?;
                    let z = Scalar::parse(parts[2], mode).map_err(|e| format!("{}", e))?;
                    Character::new(x, y, z).map_err(|e| format!("{}", e))?
                }
                (None, Some(t)) => {
                    let run = sample_level_set_workers(t, 1, &window, seed, 1)
                        .map_err(|e| format!("{}", e))?;
                    let s = run
                        .samples
                        .first()
                        .ok_or("no start point found on the level set in the window")?;
                    s.character.clone()
                }
                (None, None) => return Err("orbit needs --start or --t".into()),
            };
            let workers = workers.max(1);
            let mut rows = Vec::new();
            for w in 0..workers {
                let strand = if workers > 1 { Some(w) } else { None };
                let p = parse_policy(&policy, seed.wrapping_add(w as u64))?;
                rows.extend(orbit_records(&start_char, &p, steps, strand));
            }
            let bytes = dump_rows(&rows, &format)?;
            write_output(&out, &bytes)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Sample {
            t,
            n,
            window,
            seed,
            out,
            format,
            workers,
        } => {
            let seed = env_seed(seed);
            let window = parse_window(&window)?;
            let run = sample_level_set_workers(t, n, &window, seed, workers.max(1))
                .map_err(|e| format!("{}", e))?;
            if let Some(note) = &run.note {
                eprintln!("note: {}", note);
            }
            let bytes = dump_samples(&run, &format)?;
            write_output(&out, &bytes)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Render {
            t,
            plane,
            slice,
            out,
            format,
            window,
            width,
            height,
            overlay_rt,
            n,
            seed,
        } => {
            let seed = env_seed(seed);
            let plane: Plane = plane.parse().map_err(|e| format!("{}", e))?;
            let (h, v) = parse_plane_window(&window)?;
            let canvas = Canvas::new(width, height, h, v).map_err(|e| format!("{}", e))?;
            let bytes = match format.as_str() {
                "svg" => render_level_contour(
                    t,
                    plane,
                    slice,
                    &canvas,
                    &ContourOptions {
                        overlay_region_boundary: overlay_rt,
                    },
                ),
                "ppm" => {
                    let cube = h[0].abs().max(h[1].abs()).max(v[0].abs()).max(v[1].abs());
                    let run = sample_level_set_workers(t, n, &Window::cube(cube), seed, 1)
                        .map_err(|e| format!("{}", e))?;
                    render_density_ppm(&run.samples, plane, &canvas)
                }
                other => return Err(format!("unknown format `{}` (svg | ppm)", other)),
            };
            write_output(&out, &bytes)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Tracepoly { word } => {
            let w: FreeWord = word.parse().map_err(|e| format!("{}", e))?;
            let p = TraceCalculator::new().trace_polynomial(&w);
            println!("{}", p);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { suite } => {
            let reports = if suite == "all" {
                run_all()
            } else {
                let s: Suite = suite.parse()?;
                vec![run_suite(s)]
            };
            if print_reports(&reports) {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
    }
}

//! `c2ss`: spectral sequence runs, charts and verification reports.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use c2ss::anderson::{dual_cell_check, pairing_rows, uct_shadow};
use c2ss::chart::{page_data, render_chart, slice_data, ChartMode, ChartSpec};
use c2ss::grading::BiDegree;
use c2ss::picard::{self, Target};
use c2ss::slice::{cells_for_stems, forced_negative_differentials, slice_cells, slice_e2};
use c2ss::sseq::{page_at, run_to_stable, Page, SseqSpec, Window};
use c2ss::tmf13::{build_scenario, check_strongly_even, verify_presentation};
use c2ss_verify::criteria::{run_selected, ALL};

#[derive(Parser)]
#[command(name = "c2ss", version, about = "RO(C2)-graded spectral sequences for tmf_1(3)")]
struct Cli {
    /// Directory for output files written without an explicit `--out`.
    #[arg(long, env = "C2SS_OUT_DIR", global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    #[command(subcommand)]
    Sseq(SseqCmd),
    #[command(subcommand)]
    Tmf13(Tmf13Cmd),
    #[command(subcommand)]
    Slice(SliceCmd),
    #[command(subcommand)]
    Anderson(AndersonCmd),
    #[command(subcommand)]
    Picard(PicardCmd),
    #[command(subcommand)]
    Report(ReportCmd),
}

#[derive(Subcommand)]
enum SseqCmd {
    /// Run a spec to E_inf and print the nonzero groups.
    Run {
        spec: PathBuf,
        #[arg(long)]
        window: Option<String>,
        #[arg(long, default_value_t = 16)]
        r_max: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render one page of a spec as SVG.
    Chart {
        spec: PathBuf,
        #[arg(long, default_value_t = 2)]
        page: i64,
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long)]
        window: Option<String>,
    },
}

#[derive(Args)]
struct ChartArgs {
    #[arg(long, default_value = "0,16", value_parser = pair, allow_hyphen_values = true)]
    stems: [i64; 2],
    #[arg(long, default_value = "0,12", value_parser = pair, allow_hyphen_values = true)]
    filtrations: [i64; 2],
    /// `integer-stems` or `band:LO,HI` for sigma-multiplicities LO..=HI.
    #[arg(long, default_value = "integer-stems", value_parser = mode)]
    mode: ChartMode,
    #[arg(long)]
    arrows: bool,
    #[arg(long)]
    title: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Tmf13Cmd {
    /// Compare E_inf with the presentation and check evenness.
    Verify {
        #[arg(long, default_value_t = 40)]
        window: i64,
        #[arg(long, default_value_t = 64)]
        s_max: i64,
        #[arg(long, default_value_t = 128)]
        bound: i64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum SliceCmd {
    /// Slice E2 of the compactified spectrum, with forced differentials.
    Chart {
        #[command(flatten)]
        chart: ChartArgs,
        #[arg(long, default_value_t = 7)]
        r_max: i64,
    },
}

#[derive(Subcommand)]
enum AndersonCmd {
    Check {
        #[arg(long, default_value_t = 30)]
        kmax: i64,
        /// Dual cells are checked on `[-9 - T, T]`.
        #[arg(long, default_value_t = 60)]
        cells: i64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum PicardCmd {
    Compute {
        #[arg(long)]
        target: String,
        /// Print the whole report instead of the group.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum ReportCmd {
    All {
        #[arg(long, default_value_t = 13)]
        seed: u64,
        /// Comma-separated criterion numbers.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn pair(s: &str) -> Result<[i64; 2], String> {
    let v: Vec<i64> = s.split(',').map(|x| x.trim().parse::<i64>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?;
    match v[..] {
        [a, b] if a <= b => Ok([a, b]),
        _ => Err(format!("expected LO,HI, got `{s}`")),
    }
}

fn mode(s: &str) -> Result<ChartMode, String> {
    match s {
        "integer-stems" => Ok(ChartMode::IntegerStems),
        _ => match s.strip_prefix("band:") {
            Some(r) => pair(r).map(|sigma| ChartMode::RhoGradedBand { sigma }),
            None => Err(format!("unknown mode `{s}`")),
        },
    }
}

/// `N` (square, s_max = 2N), `N,S`, or `A0,A1,B0,B1,S`.
fn parse_window(s: &str, bound: i64) -> Result<Window> {
    let v: Vec<i64> = s.split(',').map(|x| x.trim().parse::<i64>()).collect::<Result<_, _>>().context("window")?;
    let w = match v[..] {
        [n] => Window::square(n, 2 * n),
        [n, s] => Window::square(n, s),
        [a0, a1, b0, b1, s] => Window { a: [a0, a1], b: [b0, b1], s_max: s, exponent_bound: bound },
        _ => bail!("window must be N, N,S or A0,A1,B0,B1,S"),
    };
    Ok(w.with_bound(bound))
}

fn read_spec(path: &Path) -> Result<SseqSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(SseqSpec::from_json(&text)?)
}

/// Write to `out`, or to `name` under the output directory, or to stdout.
fn emit(text: &str, out: Option<&Path>, dir: Option<&Path>, name: &str) -> Result<()> {
    let path = match (out, dir) {
        (Some(p), _) => Some(p.to_path_buf()),
        (None, Some(d)) => Some(d.join(name)),
        (None, None) => None,
    };
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|x| !x.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?;
            eprintln!("wrote {}", p.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn chart_spec(c: &ChartArgs, default_title: String) -> ChartSpec {
    ChartSpec {
        title: c.title.clone().unwrap_or(default_title),
        stems: c.stems,
        filtrations: c.filtrations,
        mode: c.mode,
        arrows: c.arrows,
    }
}

/// Smallest window containing the chart range.
fn window_for(c: &ChartArgs, bound: i64) -> Window {
    let (lo, hi) = (c.stems[0].min(0), c.stems[1].max(0));
    let sig = match c.mode {
        ChartMode::IntegerStems => [0, 0],
        ChartMode::RhoGradedBand { sigma } => sigma,
    };
    let a = [lo - sig[1], hi - sig[0]];
    Window { a, b: [sig[0].min(0), sig[1].max(0)], s_max: c.filtrations[1].max(0), exponent_bound: bound }
}

fn groups_json(page: &Page, report: &Window) -> serde_json::Value {
    let rows: Vec<serde_json::Value> = page
        .pieces
        .keys()
        .filter(|x| report.contains(**x))
        .filter_map(|&x: &BiDegree| {
            let g = page.group(x);
            (!g.is_zero()).then(|| json!({"degree": [x.degree.a, x.degree.b], "s": x.s, "group": g.to_string()}))
        })
        .collect();
    serde_json::Value::Array(rows)
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

/// Ok(true) when every check passed; errors are configuration problems.
fn dispatch(cli: Cli) -> Result<bool> {
    let dir = cli.out_dir.as_deref();
    match cli.cmd {
        Cmd::Sseq(SseqCmd::Run { spec, window, r_max, out }) => {
            let s = read_spec(&spec)?;
            let w = match window {
                Some(t) => parse_window(&t, s.window.exponent_bound)?,
                None => s.window,
            };
            let run = run_to_stable(&s.algebra, &s.differentials()?, w, r_max)?;
            let v = json!({
                "stable_page": run.stable_page,
                "unresolved": run.unresolved.iter().map(|(x, r)| json!({"source": x.to_string(), "r": r})).collect::<Vec<_>>(),
                "groups": groups_json(&run.e_inf, &w),
            });
            emit(&pretty(&v), out.as_deref(), dir, "sseq_run.json")?;
            Ok(run.unresolved.is_empty())
        }
        Cmd::Sseq(SseqCmd::Chart { spec, page, chart, window }) => {
            let s = read_spec(&spec)?;
            let w = match window {
                Some(t) => parse_window(&t, s.window.exponent_bound)?,
                None => window_for(&chart, s.window.exponent_bound),
            };
            let p = page_at(&s.algebra, &s.differentials()?, &w, page)?;
            let cs = chart_spec(&chart, format!("E{page}"));
            let data = page_data(&cs, &s.algebra, &p)?;
            emit(&render_chart(&cs, &data), chart.out.as_deref(), dir, &format!("e{page}.svg"))?;
            Ok(true)
        }
        Cmd::Tmf13(Tmf13Cmd::Verify { window, s_max, bound, json }) => {
            let scn = build_scenario("tmf13")?;
            let w = Window::square(window, s_max).with_bound(bound);
            let run = scn.run(w, 16)?;
            let rep = verify_presentation(&scn.algebra, &run.e_inf, &w);
            let k = (window / 2).min(20);
            let even = check_strongly_even(&scn.algebra, &run.e_inf, &w, -k..=k);
            let ok = run.stable_page == 8 && rep.passed() && even.passed() && run.unresolved.is_empty();
            if json {
                print!(
                    "{}",
                    pretty(&json!({"stable_page": run.stable_page, "presentation": rep, "evenness": even, "passed": ok}))
                );
            } else {
                println!("stable page: E{}", run.stable_page);
                println!(
                    "presentation: {} degrees, {} relations, {} mismatches",
                    rep.degrees_checked,
                    rep.relations_checked,
                    rep.mismatches.len()
                );
                for m in rep.mismatches.iter().take(20) {
                    println!("  {} {}: expected {}, got {}", m.degree, m.what, m.expected, m.got);
                }
                println!("evenness on |k| <= {k}: {}", if even.passed() { "holds" } else { "fails" });
                for f in &even.failures {
                    println!("  {f}");
                }
            }
            Ok(ok)
        }
        Cmd::Slice(SliceCmd::Chart { chart, r_max }) => {
            let sc = slice_e2(&cells_for_stems(chart.stems[0], chart.stems[1]), chart.stems)?;
            let forcing = chart.arrows.then(|| forced_negative_differentials(&sc, r_max));
            let cs = chart_spec(&chart, "slice E2".into());
            let data = slice_data(&cs, &sc, forcing.as_ref());
            emit(&render_chart(&cs, &data), chart.out.as_deref(), dir, "slice.svg")?;
            Ok(true)
        }
        Cmd::Anderson(AndersonCmd::Check { kmax, cells, json }) => {
            if kmax < 0 || cells < 0 {
                bail!("--kmax and --cells must be non-negative");
            }
            let rows = pairing_rows(kmax);
            let cell_rep = dual_cell_check(&slice_cells(-9 - cells, cells));
            let uct = uct_shadow(-40, 40);
            let ok = rows.iter().all(|r| r.perfect && r.ranks_agree) && cell_rep.passed() && uct.iter().all(|r| r.holds);
            if json {
                let pr: Vec<_> = rows.iter().map(|r| json!({"k": r.k, "perfect": r.perfect})).collect();
                print!(
                    "{}",
                    pretty(&json!({"pairings": pr, "dual_cells": cell_rep, "uct_holds": uct.iter().all(|r| r.holds), "passed": ok}))
                );
            } else {
                for r in &rows {
                    println!("k={:>2} size {:>2} perfect {} ranks {}", r.k, r.size, r.perfect, r.ranks_agree);
                }
                println!("dual cells: {}/{} matched", cell_rep.matched, cell_rep.cells);
                println!("UCT on -40..=40: {}", uct.iter().all(|r| r.holds));
            }
            Ok(ok)
        }
        Cmd::Picard(PicardCmd::Compute { target, json }) => {
            let t: Target = target.parse()?;
            let rep = picard::compute(t)?;
            let text = if json { serde_json::to_string(&rep)? } else { serde_json::to_string(&rep.group)? };
            println!("{text}");
            Ok(rep.consistent)
        }
        Cmd::Report(ReportCmd::All { seed, only, json, out }) => {
            let ids = if only.is_empty() { ALL.to_vec() } else { only };
            if let Some(bad) = ids.iter().find(|i| !ALL.contains(i)) {
                bail!("no criterion {bad}");
            }
            let rep = run_selected(&ids, seed);
            let text = pretty(&rep);
            if json && out.is_none() {
                print!("{text}");
                return Ok(rep.passed());
            }
            for c in &rep.criteria {
                println!("{}", c.line());
            }
            if out.is_some() || dir.is_some() {
                emit(&text, out.as_deref(), dir, "report.json")?;
            }
            let failed = rep.criteria.iter().filter(|c| !c.passed).count();
            println!("{} of {} criteria passed", rep.criteria.len() - failed, rep.criteria.len());
            Ok(failed == 0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

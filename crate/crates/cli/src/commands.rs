use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use fibmachine::chain::{
    classify, simulate, simulate_batch, stationary_measure, transition_dist, transition_matrix,
    SimulationSummary,
};
use fibmachine::config::Config;
use fibmachine::figures::select;
use fibmachine::format::significant;
use fibmachine::numeration::{Digits, Numeration};
use fibmachine::odometer::{succ_carry, succ_transducer};
use fibmachine::render::{
    rgb_bytes, scan_grid_with_threads, write_csv, write_ppm, GridSpec, IterBuffer, Palette,
};
use fibmachine::spectrum::{
    eigen_residual, in_e, in_point_spectrum, non_connectedness_test, q_fib_orbit, Connectivity,
    EscapeConfig, EscapeResult,
};
use fibmachine::{Error, Result};
use num_complex::Complex64;

use crate::args::{ChainCommand, Cli, Command, GlobalArgs, RenderArgs, ReproArgs, SpectrumCommand};

/// Truncation level used by `chain stationary` without `--levels`.
const DEFAULT_STATIONARY_LEVEL: usize = 20;
/// Critical-orbit depth used by `spectrum connectivity` without `--levels`.
const DEFAULT_CONNECTIVITY_LEVELS: usize = 60;
const DEFAULT_REPRO_DIR: &str = "repro";

fn load_config(global: &GlobalArgs) -> Result<Config> {
    let mut cfg = match &global.config {
        Some(path) => Config::load(path).map_err(|e| match e {
            Error::Io(io) => Error::InvalidConfig(format!("{}: {io}", path.display())),
            other => other,
        })?,
        None => Config::default(),
    };
    if let Some(seed) = global.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn escape_config(cfg: &Config, global: &GlobalArgs) -> Result<EscapeConfig> {
    let mut esc = cfg.escape_config()?;
    if let Some(levels) = global.levels {
        esc.max_level = levels;
    }
    Ok(esc)
}

fn complex(x: Complex64) -> String {
    format!("{},{}", significant(x.re), significant(x.im))
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let global = &cli.global;
    let cfg = load_config(global)?;
    match &cli.command {
        Command::Encode { n } => {
            let sys = Numeration::new(cfg.base.to_base()?);
            writeln!(out, "{}", sys.encode(*n))?;
        }
        Command::Decode { word } => {
            let sys = Numeration::new(cfg.base.to_base()?);
            let w: Digits = word.parse()?;
            writeln!(out, "{}", sys.decode(&w)?)?;
        }
        Command::Succ { word } => {
            let w: Digits = word.parse()?;
            let run = succ_transducer(&w)?;
            writeln!(out, "{}", run.output)?;
            if global.verbose {
                let (_, trace) = succ_carry(&w)?;
                let carries: Vec<String> = trace.carries.iter().map(u8::to_string).collect();
                writeln!(out, "path: {}", run.path_string())?;
                writeln!(
                    out,
                    "carries: {} ({:?}, halted at c_{})",
                    carries.join(""),
                    trace.branch,
                    trace.halted_at
                )?;
            }
        }
        Command::Chain(cmd) => chain(cmd, &cfg, global, out)?,
        Command::Spectrum(cmd) => spectrum(cmd, &cfg, global, out)?,
        Command::Render(args) => render(args, &cfg, global, out)?,
        Command::Repro(args) => repro(args, global, out)?,
    }
    Ok(())
}

fn summary_lines(s: &SimulationSummary, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "start: {}", s.start)?;
    writeln!(out, "steps: {}", s.steps)?;
    writeln!(out, "final_state: {}", s.final_state)?;
    writeln!(out, "visits_to_zero: {}", s.visits_to_zero)?;
    writeln!(out, "returns_to_zero: {}", s.returns_to_zero)?;
    writeln!(out, "max_state: {}", s.max_state)
}

fn chain(cmd: &ChainCommand, cfg: &Config, global: &GlobalArgs, out: &mut dyn Write) -> Result<()> {
    let p = &cfg.prob_seq;
    match cmd {
        ChainCommand::Row { state } => {
            writeln!(out, "to,term,prob")?;
            for t in transition_dist(*state, p)?.entries() {
                writeln!(out, "{},{},{}", t.target, t.term, significant(t.prob))?;
            }
        }
        ChainCommand::Matrix { level } => {
            let m = transition_matrix(*level, p)?;
            match &global.out {
                Some(path) => m.write_csv(BufWriter::new(File::create(path)?))?,
                None => m.write_csv(&mut *out)?,
            }
            if global.verbose {
                eprintln!("{} states, leak {}", m.size, significant(m.leak));
            }
        }
        ChainCommand::Simulate { start, steps, runs } => {
            if *runs <= 1 {
                summary_lines(&simulate(*start, *steps, p, cfg.seed)?, out)?;
            } else {
                let seeds: Vec<u64> = (0..*runs).map(|k| cfg.seed.wrapping_add(k)).collect();
                writeln!(
                    out,
                    "seed,final_state,visits_to_zero,returns_to_zero,max_state"
                )?;
                for (seed, s) in seeds.iter().zip(simulate_batch(*start, *steps, p, &seeds)?) {
                    writeln!(
                        out,
                        "{seed},{},{},{},{}",
                        s.final_state, s.visits_to_zero, s.returns_to_zero, s.max_state
                    )?;
                }
            }
        }
        ChainCommand::Classify => {
            let c = classify(p);
            writeln!(out, "{}", c.class)?;
            writeln!(out, "{}", c.reason)?;
        }
        ChainCommand::Stationary => {
            let level = global.levels.unwrap_or(DEFAULT_STATIONARY_LEVEL);
            let m = stationary_measure(level, p)?;
            writeln!(out, "level: {level}")?;
            writeln!(out, "states: {}", m.weights.len())?;
            writeln!(out, "partial_sum: {}", significant(m.partial_sum))?;
            writeln!(out, "summable: {}", !m.unsummable)?;
            let blocks: Vec<String> = m.block_sums.iter().map(|&b| significant(b)).collect();
            writeln!(out, "block_sums: {}", blocks.join(","))?;
            if let Some(path) = &global.out {
                let mut w = BufWriter::new(File::create(path)?);
                writeln!(w, "state,weight")?;
                for (i, x) in m.weights.iter().enumerate() {
                    writeln!(w, "{i},{}", significant(*x))?;
                }
                w.flush()?;
            }
        }
    }
    Ok(())
}

fn spectrum(
    cmd: &SpectrumCommand,
    cfg: &Config,
    global: &GlobalArgs,
    out: &mut dyn Write,
) -> Result<()> {
    let p = &cfg.prob_seq;
    match cmd {
        SpectrumCommand::Orbit { re, im } => {
            let levels = global.levels.unwrap_or(cfg.escape.max_level);
            let orbit = q_fib_orbit(Complex64::new(*re, *im), p, levels);
            writeln!(out, "n,re,im,modulus")?;
            for (n, q) in orbit.values.iter().enumerate() {
                writeln!(out, "{n},{},{}", complex(*q), significant(q.norm()))?;
            }
            if let Some(k) = orbit.escaped_at {
                eprintln!("orbit passes the overflow cap at level {k}");
            }
        }
        SpectrumCommand::Member { re, im, bound } => {
            let esc = escape_config(cfg, global)?;
            let lambda = Complex64::new(*re, *im);
            match in_e(lambda, p, &esc) {
                EscapeResult::Inside => writeln!(out, "E: inside")?,
                EscapeResult::Escaped(k) => writeln!(out, "E: escaped at level {k}")?,
            }
            let ps = in_point_spectrum(lambda, p, &esc, *bound);
            writeln!(out, "point spectrum: {:?}", ps.verdict)?;
            if let Some(b) = ps.b.last() {
                writeln!(out, "B_{}: {}", ps.b.len() - 1, significant(*b))?;
            }
            writeln!(out, "radius: {}", significant(esc.radius))?;
        }
        SpectrumCommand::Connectivity => {
            let levels = global.levels.unwrap_or(DEFAULT_CONNECTIVITY_LEVELS);
            match non_connectedness_test(p, levels)? {
                Connectivity::NonConnected { level } => {
                    writeln!(out, "NonConnected at level {level}")?
                }
                Connectivity::Inconclusive { reason } => writeln!(out, "Inconclusive: {reason}")?,
            }
        }
        SpectrumCommand::Residual { re, im, level } => {
            let r = eigen_residual(Complex64::new(*re, *im), p, *level)?;
            writeln!(out, "residual: {}", significant(r.residual))?;
            writeln!(out, "bound: {}", significant(r.bound))?;
            writeln!(out, "w_norm: {}", significant(r.w_norm))?;
            writeln!(out, "head_residual: {}", significant(r.head_residual))?;
        }
    }
    Ok(())
}

fn write_png(buf: &IterBuffer, palette: &Palette, path: &Path) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    let mut encoder = png::Encoder::new(file, buf.width, buf.height);
    encoder.set_color(png::ColorType::Rgb);
    encoder.set_depth(png::BitDepth::Eight);
    let mut writer = encoder.write_header().map_err(io::Error::other)?;
    writer
        .write_image_data(&rgb_bytes(buf, palette))
        .map_err(io::Error::other)?;
    writer.finish().map_err(io::Error::other)?;
    Ok(())
}

/// Writes `buf` in the format named by the extension of `path`.
pub fn write_image(buf: &IterBuffer, path: &Path) -> Result<()> {
    let palette = Palette::default();
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("ppm") => {
            let mut w = BufWriter::new(File::create(path)?);
            write_ppm(buf, &palette, &mut w)?;
            w.flush()?;
        }
        Some("png") => write_png(buf, &palette, path)?,
        Some("csv") => {
            let mut w = BufWriter::new(File::create(path)?);
            write_csv(buf, &mut w)?;
            w.flush()?;
        }
        _ => {
            return Err(Error::InvalidConfig(format!(
                "{}: output must end in .ppm, .png or .csv",
                path.display()
            )))
        }
    }
    Ok(())
}

fn sized(grid: &GridSpec, pixels: Option<u32>) -> GridSpec {
    let mut grid = *grid;
    if let Some(n) = pixels {
        grid.pixels_x = n;
        grid.pixels_y = n;
    }
    grid
}

fn render(args: &RenderArgs, cfg: &Config, global: &GlobalArgs, out: &mut dyn Write) -> Result<()> {
    let targets: Vec<PathBuf> = match &global.out {
        Some(path) => vec![path.clone()],
        None => [&cfg.output.ppm, &cfg.output.png, &cfg.output.csv]
            .into_iter()
            .flatten()
            .cloned()
            .collect(),
    };
    if targets.is_empty() {
        return Err(Error::InvalidConfig(
            "no output path: pass --out or set output paths in the configuration".into(),
        ));
    }
    let grid = sized(&cfg.grid, args.pixels);
    grid.validate()?;
    let esc = escape_config(cfg, global)?;
    let buf = scan_grid_with_threads(&grid, &cfg.prob_seq, &esc, args.threads)?;
    for path in &targets {
        write_image(&buf, path)?;
        if global.verbose {
            writeln!(out, "wrote {}", path.display())?;
        }
    }
    writeln!(
        out,
        "inside: {} of {}",
        buf.inside_count(),
        grid.pixel_count()
    )?;
    Ok(())
}

fn repro(args: &ReproArgs, global: &GlobalArgs, out: &mut dyn Write) -> Result<()> {
    let panels = select(&args.selector)?;
    let dir = global
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(DEFAULT_REPRO_DIR));
    fs::create_dir_all(&dir)?;
    for panel in panels {
        let cfg = panel.config()?;
        let grid = sized(&cfg.grid, args.pixels);
        let esc = escape_config(&cfg, global)?;
        let buf = scan_grid_with_threads(&grid, &cfg.prob_seq, &esc, args.threads)?;
        let ppm = dir.join(format!("{}.ppm", panel.name()));
        write_image(&buf, &ppm)?;
        if args.png {
            write_image(&buf, &ppm.with_extension("png"))?;
        }
        writeln!(
            out,
            "{} {}x{} inside={} {}",
            panel.name(),
            grid.pixels_x,
            grid.pixels_y,
            buf.inside_count(),
            ppm.display()
        )?;
    }
    Ok(())
}

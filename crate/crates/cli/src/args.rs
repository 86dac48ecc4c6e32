use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use theta_atlas_core::Extent;

#[derive(Debug, Parser)]
#[command(
    name = "theta-atlas",
    version,
    about = "Zeros of the partial theta function: exact checks, certified thresholds, counting and plots"
)]
pub struct Cli {
    /// Mantissa bits for multiprecision evaluation (default 256, or THETA_ATLAS_PREC_BITS).
    #[arg(long, global = true)]
    pub prec_bits: Option<usize>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate θ, ∂θ/∂z, u and (q;q)_∞ at one point.
    Eval {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        q: Complex64,
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
    },
    /// Locate the first zeros of θ(q, ·).
    Zeros {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        q: Complex64,
        #[arg(long, default_value_t = 5)]
        count: usize,
    },
    /// Count zeros of θ(q, ·) in a disk.
    Count {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        q: Complex64,
        /// Disk |z| < |q|^{-n-1/2}; the count is checked against n.
        #[arg(long, conflicts_with = "radius", required_unless_present = "radius")]
        n: Option<usize>,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Certify the threshold n₀ for an annulus δ₀ ≤ |q| ≤ δ.
    Certify {
        #[arg(long)]
        delta0: f64,
        #[arg(long)]
        delta: f64,
        /// Moduli in the witness grid (endpoints included).
        #[arg(long, default_value_t = 4)]
        grid_moduli: usize,
        /// Phases in the witness grid.
        #[arg(long, default_value_t = 4)]
        grid_phases: usize,
        /// Contour samples per Rouché witness.
        #[arg(long, default_value_t = 1024)]
        samples: usize,
    },
    /// Check the coefficient inequalities of the majorant lemma.
    Lemma {
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        /// Largest finite j ("inf" for none); j = ∞ is always checked.
        #[arg(long, default_value = "18", value_parser = parse_extent)]
        j_max: Extent,
        #[arg(long, default_value_t = 40)]
        nu_max: usize,
    },
    /// Compare both sides of the product expansion of u coefficient by coefficient.
    Identity {
        #[arg(long, default_value_t = 10)]
        zorder: usize,
        #[arg(long, default_value_t = 30)]
        qorder: usize,
    },
    /// Check |γ²_ν| ≤ γ¹_ν for one (p, r) or every 1 ≤ p ≤ r ≤ r_max.
    Gamma {
        #[arg(long, requires = "r")]
        p: Option<usize>,
        #[arg(long, requires = "p", conflicts_with = "r_max")]
        r: Option<usize>,
        #[arg(long, default_value_t = 12)]
        r_max: usize,
        #[arg(long, default_value_t = 40)]
        order: usize,
    },
    /// Draw zeros and counting circles as SVG.
    Plot {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        q: Complex64,
        #[arg(long, default_value_t = 5)]
        count: usize,
        /// SVG destination.
        #[arg(long)]
        svg: PathBuf,
    },
}

/// `"re,im"` or a bare real number.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parse = |t: &str| {
        t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")).and_then(|v| {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("`{t}` is not finite"))
            }
        })
    };
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse(re)?, parse(im)?)),
        None => Ok(Complex64::new(parse(s)?, 0.0)),
    }
}

pub fn parse_extent(s: &str) -> Result<Extent, String> {
    match s.trim() {
        "inf" | "infinity" | "∞" => Ok(Extent::Infinite),
        t => t.parse().map(Extent::Finite).map_err(|e| format!("`{t}`: {e}")),
    }
}

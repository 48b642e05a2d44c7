use std::path::Path;

use serde::Serialize;
use wf_core::counterexample::{ratio_curve, CounterexampleSpec, PhiSpec};
use wf_core::dyadic::band_spectrum;
use wf_core::grid::{lp_quasinorm, weak_lp};
use wf_core::io::{self, format_float};
use wf_core::kernels::{self, ScaledKernel};
use wf_core::operators::{hardy_norm, weighted_maximal, MaximalOperatorSpec, WeightSpec};
use wf_core::verify::{run_suite, Suite};
use wf_core::{WfError, MAX_SCALE};

use crate::output::{print_json, with_sink};
use crate::{Failure, Format, KernelKind, Weight};

fn check_scale(scale: u32) -> Result<(), Failure> {
    if scale > MAX_SCALE {
        return Err(WfError::ScaleTooLarge(scale).into());
    }
    Ok(())
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure::Usage(e.to_string())
}

#[derive(Serialize)]
struct SpectrumOutput {
    s: u32,
    #[serde(rename = "A")]
    union: Vec<u32>,
    r1: usize,
    r2: usize,
    r3: usize,
}

pub fn spectrum(s: u32, family: &[u64]) -> Result<(), Failure> {
    let spectrum = band_spectrum(s, family)?;
    print_json(&SpectrumOutput {
        s,
        union: spectrum.union,
        r1: spectrum.r1,
        r2: spectrum.r2,
        r3: spectrum.r3,
    })
}

fn pow2_exponent(n: u64) -> Result<u32, Failure> {
    if n.is_power_of_two() {
        Ok(n.trailing_zeros())
    } else {
        Err(Failure::Usage(format!("n = {n} is not a power of two")))
    }
}

#[derive(Serialize)]
struct KernelOutput<'a> {
    kernel: &'a str,
    n: u64,
    scale: u32,
    scale_factor: i64,
    scaled_values: &'a [i64],
}

pub fn kernel(kind: KernelKind, n: u64, scale: u32, format: Format, out: Option<&Path>) -> Result<(), Failure> {
    check_scale(scale)?;
    let (name, k): (&str, ScaledKernel) = match kind {
        KernelKind::Dirichlet => ("dirichlet", kernels::dirichlet(n, scale)?),
        KernelKind::DirichletPow2 => ("dirichlet-pow2", kernels::dirichlet_pow2_closed(pow2_exponent(n)?, scale)?),
        KernelKind::Fejer => ("fejer", kernels::fejer_scaled(n, scale)?),
        KernelKind::FejerPow2 => ("fejer-pow2", kernels::fejer_pow2_closed(pow2_exponent(n)?, scale)?),
        KernelKind::Gat => ("gat", kernels::gat_decomposition(n, scale)?),
        KernelKind::Lemma4Rhs => ("lemma4-rhs", kernels::lemma4_rhs(n, scale)?),
    };
    with_sink(out, |sink| match format {
        Format::Csv => Ok(io::write_kernel(sink, &k)?),
        Format::Json => {
            let text = crate::output::json(&KernelOutput {
                kernel: name,
                n,
                scale,
                scale_factor: k.scale_factor(),
                scaled_values: k.values(),
            })?;
            sink.write_all(text.as_bytes()).map_err(io_failure)
        }
    })
}

pub fn verify(suite: Suite, scale: u32, seed: u64) -> Result<(), Failure> {
    check_scale(scale)?;
    let report = run_suite(suite, scale, seed)?;
    print_json(&report)?;
    if report.passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

#[derive(Serialize)]
struct MaximalSummary {
    scale: u32,
    indices: usize,
    l_half_quasinorm: f64,
    weak_l_half: f64,
    hardy_half_of_input: f64,
}

pub fn maximal(
    seq_file: &Path,
    weight: Weight,
    phi_file: Option<&Path>,
    input: &Path,
    out: Option<&Path>,
) -> Result<(), Failure> {
    let indices = io::read_indices(io::open(seq_file)?)?;
    let weight = match (weight, phi_file) {
        (Weight::Custom, Some(path)) => WeightSpec::Custom(io::read_weights(io::open(path)?)?),
        (Weight::Custom, None) => return Err(Failure::Usage("--weight custom needs --phi-file".into())),
        (_, Some(_)) => return Err(Failure::Usage("--phi-file is only used with --weight custom".into())),
        (Weight::Card, None) => WeightSpec::CardSquared,
        (Weight::Log2, None) => WeightSpec::LogSquared,
        (Weight::Var, None) => WeightSpec::VariationSquared,
    };
    let spec = MaximalOperatorSpec::new(indices, weight)?;
    let f = io::read_grid(io::open(input)?)?;
    let star = weighted_maximal(&f, &spec);
    if let Some(path) = out {
        with_sink(Some(path), |sink| Ok(io::write_grid(sink, &star)?))?;
    }
    print_json(&MaximalSummary {
        scale: f.scale(),
        indices: spec.indices().len(),
        l_half_quasinorm: lp_quasinorm(&star, 0.5)?,
        weak_l_half: weak_lp(&star, 0.5)?,
        hardy_half_of_input: hardy_norm(&f, 0.5)?,
    })
}

fn parse_phi(text: &str) -> Result<PhiSpec, Failure> {
    if text == "card2" {
        return Ok(PhiSpec::CardSquared);
    }
    if let Some(v) = text.strip_prefix("const:") {
        let v: f64 = v
            .parse()
            .map_err(|_| Failure::Usage(format!("bad constant weight {v:?}")))?;
        return Ok(PhiSpec::Const(v));
    }
    if let Some(path) = text.strip_prefix("file:") {
        return Ok(PhiSpec::Explicit(io::read_weights(io::open(Path::new(path))?)?));
    }
    Err(Failure::Usage(format!(
        "unknown --phi {text:?}: expected const:<v>, card2 or file:<path>"
    )))
}

pub fn counterexample(family: &str, phi: &str, scales: &[u32], out: Option<&Path>) -> Result<(), Failure> {
    for &scale in scales {
        check_scale(scale)?;
    }
    let phi = parse_phi(phi)?;
    let spec = if family == "alt-bits" {
        let max_band = scales.iter().copied().max().unwrap_or(1).max(1);
        CounterexampleSpec::alternating_bits(max_band, phi)?
    } else if let Some(path) = family.strip_prefix("file:") {
        CounterexampleSpec::from_family(io::read_indices(io::open(Path::new(path))?)?, phi)?
    } else {
        return Err(Failure::Usage(format!(
            "unknown --family {family:?}: expected alt-bits or file:<path>"
        )));
    };
    let curve = ratio_curve(&spec, scales)?;
    with_sink(out, |sink| {
        writeln!(sink, "M,ratio,hardy_half,sup_half").map_err(io_failure)?;
        for p in &curve {
            writeln!(
                sink,
                "{},{},{},{}",
                p.scale,
                format_float(p.ratio),
                format_float(p.hardy_half),
                format_float(p.sup_half)
            )
            .map_err(io_failure)?;
        }
        Ok(())
    })
}

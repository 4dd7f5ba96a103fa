use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use serde_json::json;

use twistalg::io::{self, Report};
use twistalg::state::{self, CompressOptions, ExtendOptions, StateFunctional};
use twistalg::structure::{self, IsotropyEmbedding};
use twistalg::{random, rep, AlgebraExt, TwistedAlgebra};

pub struct Options {
    pub seed: u64,
    pub tolerance: f64,
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

struct Loaded {
    bytes: Vec<u8>,
    alg: Arc<TwistedAlgebra>,
}

fn load(path: &Path) -> Result<Loaded> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone()).context("file is not UTF-8")?;
    let (g, cocycle) = io::parse_groupoid_str(&text).with_context(|| format!("{}", path.display()))?;
    Ok(Loaded {
        alg: io::algebra_of(g, cocycle),
        bytes,
    })
}

/// Round to 12 decimals so printed norms do not show last-bit noise.
fn tidy(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

pub fn validate(path: &Path, opts: &Options) -> Result<Report> {
    let l = load(path)?;
    let g = l.alg.groupoid();
    let sigma = l.alg.cocycle();
    let twist = sigma.validate_twist_axioms();
    let mut r = Report::new("validate", &[&l.bytes], opts.seed, opts.tolerance);
    r.finding("elements", g.len())
        .finding("units", g.units().len())
        .finding("cocycle_order", sigma.order())
        .finding("twist_elements", twist.elements)
        .check("twist_axioms", twist.all_pass(), twist.first_violation.clone());
    Ok(r)
}

pub fn info(path: &Path, opts: &Options) -> Result<Report> {
    let l = load(path)?;
    let g = l.alg.groupoid();
    let sigma = l.alg.cocycle();
    let mut r = Report::new("info", &[&l.bytes], opts.seed, opts.tolerance);
    r.finding("elements", g.len())
        .finding("units", g.units().len())
        .finding("orbits", g.orbits().len())
        .finding("isotropy", g.isotropy().len())
        .finding("effective", g.is_effective())
        .finding("minimal", g.is_minimal())
        .finding("group", g.is_group())
        .finding("cocycle_order", sigma.order())
        .finding("cocycle_trivial", sigma.is_trivial());
    Ok(r)
}

fn parse_coeffs(alg: &Arc<TwistedAlgebra>, spec: &str) -> Result<twistalg::AlgElem> {
    let mut coeffs = vec![Complex64::new(0.0, 0.0); alg.dim()];
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| anyhow!("coefficient `{item}` is not of the form id=value"))?;
        let a = alg
            .groupoid()
            .arrow(name.trim())
            .ok_or_else(|| anyhow!("unknown element `{}`", name.trim()))?;
        let v = Complex64::from_str(value.trim()).map_err(|_| anyhow!("bad coefficient value `{}`", value.trim()))?;
        coeffs[a.0] += v;
    }
    Ok(alg.from_coeffs(coeffs)?)
}

pub fn norm(path: &Path, coeffs: &str, opts: &Options) -> Result<Report> {
    let l = load(path)?;
    let f = parse_coeffs(&l.alg, coeffs)?;
    let n = rep::reduced_norm(&f);
    let nstar = rep::reduced_norm(&(&f.involute() * &f));
    let defect = (nstar - n * n).abs() / (n * n).max(f64::MIN_POSITIVE);
    let mut r = Report::new("norm", &[&l.bytes, coeffs.as_bytes()], opts.seed, opts.tolerance);
    r.finding("norm", tidy(n)).check(
        "c_star_identity",
        n == 0.0 || defect <= opts.tolerance,
        Some(format!("relative defect {defect:.3e}")),
    );
    Ok(r)
}

pub fn blocks(path: &Path, opts: &Options) -> Result<Report> {
    let l = load(path)?;
    let image = rep::algebra_image(&l.alg)?;
    let b = rep::wedderburn_blocks(&image, opts.seed)?;
    let mut r = Report::new("blocks", &[&l.bytes], opts.seed, opts.tolerance);
    r.finding("blocks", &b.sizes)
        .finding("center_dim", b.center_dim)
        .finding("simple", b.is_simple())
        .check("dimension_count", b.dimension() == l.alg.dim(), None);
    Ok(r)
}

pub fn embed_check(path: &Path, samples: usize, opts: &Options) -> Result<Report> {
    let l = load(path)?;
    let emb = IsotropyEmbedding::new(&l.alg);
    let iso = emb.isotropy_algebra().clone();
    let mut rng = random::seeded(opts.seed);
    let (mut isometry, mut off_block, mut spectra) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..samples {
        let f = random::element(&iso, &mut rng);
        let big = emb.iota(&f)?;
        isometry = isometry.max((rep::reduced_norm(&big) - rep::reduced_norm(&f)).abs());
        for &u in l.alg.groupoid().units() {
            let br = emb.verify_block_structure(&f, u)?;
            off_block = off_block.max(br.off_block_max);
            spectra = spectra.max(br.max_eigenvalue_distance);
        }
    }
    let tol = opts.tolerance;
    let mut r = Report::new("embed-check", &[&l.bytes], opts.seed, tol);
    r.finding("samples", samples)
        .finding("isotropy_dim", iso.dim())
        .finding("max_norm_gap", isometry)
        .finding("max_off_block", off_block)
        .finding("max_spectrum_gap", spectra)
        .check("isometry", isometry <= tol, None)
        .check("block_diagonal", off_block <= tol, None)
        .check("block_spectra", spectra <= tol, None);
    Ok(r)
}

pub fn quotient(path: &Path, unit: &str, samples: usize, opts: &Options) -> Result<Report> {
    let l = load(path)?;
    let g = l.alg.groupoid();
    let u = g.unit(unit).map_err(|_| anyhow!("`{unit}` is not a unit"))?;
    let emb = IsotropyEmbedding::new(&l.alg);
    let q = emb.quotient(unit)?;
    let iso = emb.isotropy_algebra().clone();
    let group = q.group_algebra().clone();
    let expected_kernel = g.interior_isotropy().len() - g.isotropy_group(u)?.len();

    let mut rng = random::seeded(opts.seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let (f, h) = (random::element(&iso, &mut rng), random::element(&iso, &mut rng));
        let lhs = q.apply(&(&f * &h))?;
        let rhs = &q.apply(&f)? * &q.apply(&h)?;
        worst = worst.max((&lhs - &rhs).sup_norm());
    }
    // a unit-supported element equal to 1 at u goes to the group identity
    let units_mask: Vec<bool> = iso.groupoid().arrows().map(|a| iso.groupoid().is_unit(a)).collect();
    let mut ident = random::element_on(&iso, &units_mask, &mut rng).coeffs().to_vec();
    let u_iso = iso.groupoid().arrow(unit).expect("units lie in the isotropy");
    ident[u_iso.0] = Complex64::new(1.0, 0.0);
    let image = q.apply(&iso.from_coeffs(ident)?)?;
    let group_unit = group.groupoid().units()[0];
    let exact_identity = image == group.delta(group_unit);

    let mut r = Report::new("quotient", &[&l.bytes, unit.as_bytes()], opts.seed, opts.tolerance);
    r.finding("unit", unit)
        .finding("group_order", group.dim())
        .finding("kernel_dim", q.kernel_dim())
        .finding("expected_kernel_dim", expected_kernel)
        .finding("max_multiplicativity_defect", worst)
        .check("kernel_dim", q.kernel_dim() == expected_kernel, None)
        .check("multiplicative", worst <= opts.tolerance, None)
        .check("unit_to_identity", exact_identity, None);
    Ok(r)
}

pub fn uniqueness(path: &Path, hom_path: &Path, opts: &Options) -> Result<Report> {
    let l = load(path)?;
    let hom_bytes = read(hom_path)?;
    let hom_text = String::from_utf8(hom_bytes.clone()).context("hom file is not UTF-8")?;
    let h = io::parse_hom_str(&hom_text, &l.alg).with_context(|| format!("{}", hom_path.display()))?;
    let mut r = Report::new("uniqueness", &[&l.bytes, &hom_bytes], opts.seed, opts.tolerance);
    let h = match h.validate(opts.tolerance.max(rep::RELATION_TOL)) {
        Ok(h) => h,
        Err(e) => {
            r.check("homomorphism", false, Some(e.to_string()));
            return Ok(r);
        }
    };
    let u = structure::uniqueness_check(&h)?;
    r.finding("inj_full", u.inj_full)
        .finding("inj_iso", u.inj_on_isotropy)
        .finding("rank_full", u.rank_full)
        .finding("rank_iso", u.rank_on_isotropy)
        .finding("consistent", u.theorem_consistent)
        .check("homomorphism", true, None)
        .check("theorem_consistent", u.theorem_consistent, None);
    Ok(r)
}

pub fn simplicity(path: &Path, opts: &Options) -> Result<Report> {
    let l = load(path)?;
    let s = structure::simplicity_report(&l.alg, opts.seed)?;
    let mut r = Report::new("simplicity", &[&l.bytes], opts.seed, opts.tolerance);
    r.finding("effective", s.effective)
        .finding("minimal", s.minimal)
        .finding("simple", s.oracle_simple)
        .finding("blocks", &s.oracle_blocks)
        .finding("consistent", s.consistent)
        .check("criterion_matches_blocks", s.consistent != Some(false), None);
    Ok(r)
}

pub fn states(path: &Path, probes: usize, opts: &Options) -> Result<Report> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes.clone()).context("states file is not UTF-8")?;
    let problem = io::parse_states_str(&text).with_context(|| format!("{}", path.display()))?;
    let a = Arc::new(problem.algebra);
    let b = Arc::new(problem.subalgebra);
    for (name, alg) in [("algebra", &a), ("subalgebra", &b)] {
        let res = alg.closure_residual();
        if res > 1e-8 {
            bail!("{name} is not closed under products and adjoints (residual {res:.3e})");
        }
    }
    let phi = StateFunctional::new(b.clone(), problem.riesz)?;
    let compress = CompressOptions {
        samples: 16,
        seed: opts.seed,
        extra_candidates: problem.candidates,
    };
    let extend = ExtendOptions { probes, seed: opts.seed };
    let report = state::analyze(&a, &phi, &compress, &extend)?;

    let on_a = report.extension.extension.clone();
    let md = state::mult_domain(&on_a);
    let peaks: Vec<_> = problem
        .probe_elements
        .iter()
        .map(|x| state::in_unitary_peak_set(&on_a, &md, x))
        .collect();
    let hits = peaks.iter().filter(|p| p.member).count();
    let peaks_ok = peaks.iter().all(|p| p.holds());

    let mut r = Report::new("states", &[&bytes], opts.seed, opts.tolerance);
    r.finding("algebra_dim", a.dim())
        .finding("subalgebra_dim", b.dim())
        .finding("null_space_dim", phi.null_space().len())
        .finding("compressible", report.compression.certificate.is_some())
        .finding("unique", report.extension.unique)
        .finding("spread", tidy(report.extension.spread))
        .finding("state_pure", phi.is_pure())
        .finding("extension_pure", on_a.is_pure())
        .finding("mult_domain_dim", md.dim())
        .finding("peak_hits", hits)
        .finding(
            "extension_diagonal",
            on_a.riesz().diagonal().iter().map(|z| tidy(z.re)).collect::<Vec<_>>(),
        )
        .check("theorem_consistent", report.consistent(), None)
        .check("mult_domain_descriptions_agree", md.consistent, None)
        .check("peak_set_in_mult_domain", peaks_ok, None);
    if let Some((p, q)) = &report.extension.witnesses {
        r.finding("witness_separation", json!(p.max_deviation_on(q, &a)));
    }
    Ok(r)
}

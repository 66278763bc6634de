//! Command implementations behind the `projsvd` binary.
//!
//! Three commands: `generate` writes a synthetic matrix plus a ground
//! truth sidecar, `analyze` runs the structured decomposition and prints
//! a report, `verify` runs the full invariant suite on one input or on a
//! seeded sweep. Exit codes are a contract: 0 success, 1 invariant
//! failure, 2 domain rejection, 3 I/O or parse error.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::generators::{idempotent_from_spec, involutory_from_spec, GeneratorSpec};
use crate::idempotent::{
    analyze_idempotent, principal_angles_with, validate_idempotent, Tolerances,
};
use crate::involutory::{
    involutory_svd_with, pairing_check_with, tn_relation_check, validate_involutory, Sign,
};
use crate::kernels::svd_oracle;
use crate::matrix::Matrix;
use crate::report::{AnalysisReport, ORACLE_GAP_RTOL, TN_RESIDUAL_SCALE};
use crate::textio::{read_matrix, write_matrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Maps library errors onto the exit-code contract.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Parse(_) | Error::Io(_) | Error::NonFinite { .. } => EXIT_IO,
        Error::InvalidSpec(_)
        | Error::Domain { .. }
        | Error::Shape { .. }
        | Error::InvalidPermutation(_) => EXIT_DOMAIN,
        Error::Diagnostic { .. } | Error::CensusMismatch { .. } | Error::Convergence { .. } => {
            EXIT_CHECK_FAILED
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenerateKind {
    Idempotent,
    Involutory,
}

impl FromStr for GenerateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "idempotent" => Ok(GenerateKind::Idempotent),
            "involutory" => Ok(GenerateKind::Involutory),
            other => Err(Error::Parse(format!(
                "kind must be 'idempotent' or 'involutory', got '{}'",
                other
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnalyzeMode {
    Auto,
    Idempotent,
    Involutory,
}

impl FromStr for AnalyzeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(AnalyzeMode::Auto),
            "idempotent" => Ok(AnalyzeMode::Idempotent),
            "involutory" => Ok(AnalyzeMode::Involutory),
            other => Err(Error::Parse(format!(
                "mode must be auto, idempotent or involutory, got '{}'",
                other
            ))),
        }
    }
}

fn join_full(values: &[f64]) -> String {
    values.iter().map(|v| format!("{}", v)).collect::<Vec<_>>().join(",")
}

/// Expected singular values of the idempotent described by `spec`, sorted.
fn expected_idempotent_sigma(spec: &GeneratorSpec) -> Vec<f64> {
    let mut sigma = Vec::with_capacity(spec.n);
    for &p in &spec.psi {
        sigma.push(1.0 / p.cos());
    }
    sigma.resize(spec.r, 1.0);
    sigma.resize(spec.n, 0.0);
    sigma
}

/// Expected singular values of the involutory matrix over `spec`, sorted.
fn expected_involutory_sigma(spec: &GeneratorSpec) -> Vec<f64> {
    let nu = spec.r.min(spec.n - spec.r);
    let tangent = |j: usize| -> f64 {
        if j < spec.t {
            (0.5 * (FRAC_PI_2 + spec.psi[j])).tan()
        } else {
            1.0
        }
    };
    let mut sigma = Vec::with_capacity(spec.n);
    for j in 0..nu {
        sigma.push(tangent(j));
    }
    sigma.resize(spec.n - nu, 1.0);
    for j in (0..nu).rev() {
        sigma.push(1.0 / tangent(j));
    }
    sigma
}

fn truth_sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_os_string();
    s.push(".truth");
    PathBuf::from(s)
}

fn render_truth(kind: GenerateKind, spec: &GeneratorSpec, sign: Sign) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# ground truth written by projsvd generate");
    let kind_name = match kind {
        GenerateKind::Idempotent => "idempotent",
        GenerateKind::Involutory => "involutory",
    };
    let _ = writeln!(out, "kind = {}", kind_name);
    let _ = writeln!(out, "spec = {}", spec);
    if kind == GenerateKind::Involutory {
        let _ = writeln!(out, "sign = {}", sign);
    }
    let _ = writeln!(out, "n = {}", spec.n);
    let _ = writeln!(out, "r = {}", spec.r);
    let _ = writeln!(out, "s = {}", spec.n - spec.r);
    let _ = writeln!(out, "t = {}", spec.t);
    let _ = writeln!(out, "nu = {}", spec.r.min(spec.n - spec.r));
    let _ = writeln!(out, "psi = {}", join_full(&spec.psi));
    let sigma = match kind {
        GenerateKind::Idempotent => expected_idempotent_sigma(spec),
        GenerateKind::Involutory => expected_involutory_sigma(spec),
    };
    let _ = writeln!(out, "sigma = {}", join_full(&sigma));
    out
}

/// Parsed truth sidecar.
#[derive(Debug, Clone)]
pub struct TruthFile {
    pub kind: String,
    pub n: usize,
    pub r: usize,
    pub s: usize,
    pub t: usize,
    pub nu: usize,
    pub psi: Vec<f64>,
    pub sigma: Vec<f64>,
}

pub fn parse_truth(text: &str) -> Result<TruthFile> {
    let mut kind = None;
    let mut ints = [None::<usize>; 5];
    let keys = ["n", "r", "s", "t", "nu"];
    let mut psi = None;
    let mut sigma = None;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("truth line without '=': '{}'", line)))?;
        let key = key.trim();
        let value = value.trim();
        let parse_list = |v: &str| -> Result<Vec<f64>> {
            if v.is_empty() {
                return Ok(vec![]);
            }
            v.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::Parse(format!("bad truth value '{}': {}", tok, e)))
                })
                .collect()
        };
        match key {
            "kind" => kind = Some(value.to_string()),
            "spec" | "sign" => {}
            "psi" => psi = Some(parse_list(value)?),
            "sigma" => sigma = Some(parse_list(value)?),
            _ => {
                if let Some(idx) = keys.iter().position(|&k| k == key) {
                    ints[idx] = Some(
                        value
                            .parse::<usize>()
                            .map_err(|e| Error::Parse(format!("bad truth count '{}': {}", value, e)))?,
                    );
                }
            }
        }
    }
    let get = |idx: usize| -> Result<usize> {
        ints[idx].ok_or_else(|| Error::Parse(format!("truth file missing '{}'", keys[idx])))
    };
    Ok(TruthFile {
        kind: kind.ok_or_else(|| Error::Parse("truth file missing 'kind'".into()))?,
        n: get(0)?,
        r: get(1)?,
        s: get(2)?,
        t: get(3)?,
        nu: get(4)?,
        psi: psi.ok_or_else(|| Error::Parse("truth file missing 'psi'".into()))?,
        sigma: sigma.ok_or_else(|| Error::Parse("truth file missing 'sigma'".into()))?,
    })
}

/// `generate <kind> <spec> <out>`: writes the matrix text file plus the
/// `<out>.truth` sidecar.
pub fn run_generate(kind: GenerateKind, spec_text: &str, sign: Sign, out: &Path) -> i32 {
    let spec = match GeneratorSpec::parse(spec_text) {
        Ok(spec) => spec,
        Err(err) => {
            eprintln!("error: {}", err);
            return EXIT_DOMAIN;
        }
    };
    let matrix = match kind {
        GenerateKind::Idempotent => idempotent_from_spec(&spec).map(|(m, _, _)| m),
        GenerateKind::Involutory => involutory_from_spec(&spec, sign),
    };
    let matrix = match matrix {
        Ok(m) => m,
        Err(err) => {
            eprintln!("error: {}", err);
            return exit_code_for(&err);
        }
    };
    if let Err(err) = write_matrix(out, &matrix) {
        eprintln!("error: {}", err);
        return EXIT_IO;
    }
    let truth_path = truth_sidecar_path(out);
    if let Err(err) = std::fs::write(&truth_path, render_truth(kind, &spec, sign)) {
        eprintln!("error: {}", err);
        return EXIT_IO;
    }
    println!(
        "wrote {} ({}x{}) and {}",
        out.display(),
        matrix.rows(),
        matrix.cols(),
        truth_path.display()
    );
    EXIT_OK
}

/// Decides the analysis branch from the two residuals.
fn classify(
    mode: AnalyzeMode,
    res_idem: Result<f64>,
    res_invol: Result<f64>,
    tol: &Tolerances,
) -> std::result::Result<(AnalyzeMode, f64, f64), i32> {
    let res_idem = match res_idem {
        Ok(r) => r,
        Err(err) => {
            eprintln!("error: {}", err);
            return Err(exit_code_for(&err));
        }
    };
    let res_invol = match res_invol {
        Ok(r) => r,
        Err(err) => {
            eprintln!("error: {}", err);
            return Err(exit_code_for(&err));
        }
    };
    let chosen = match mode {
        AnalyzeMode::Idempotent => AnalyzeMode::Idempotent,
        AnalyzeMode::Involutory => AnalyzeMode::Involutory,
        AnalyzeMode::Auto => {
            let idem_ok = res_idem <= tol.idem;
            let invol_ok = res_invol <= tol.invol;
            match (idem_ok, invol_ok) {
                (false, false) => {
                    eprintln!(
                        "error: matrix is neither idempotent nor involutory within tolerance \
                         (idempotency residual {:.3e} vs {:.1e}, involution residual {:.3e} vs {:.1e})",
                        res_idem, tol.idem, res_invol, tol.invol
                    );
                    return Err(EXIT_DOMAIN);
                }
                (true, false) => AnalyzeMode::Idempotent,
                (false, true) => AnalyzeMode::Involutory,
                (true, true) => {
                    if res_idem <= res_invol {
                        AnalyzeMode::Idempotent
                    } else {
                        AnalyzeMode::Involutory
                    }
                }
            }
        }
    };
    Ok((chosen, res_idem, res_invol))
}

/// `analyze <input>`: structured decomposition plus the report.
pub fn run_analyze(path: &Path, mode: AnalyzeMode, sign: Sign, json: bool, tol: &Tolerances) -> i32 {
    let matrix = match read_matrix(path) {
        Ok(m) => m,
        Err(err) => {
            eprintln!("error: {}", err);
            return exit_code_for(&err);
        }
    };
    let start = Instant::now();
    let (branch, _res_idem, res_invol) = match classify(
        mode,
        validate_idempotent(&matrix),
        validate_involutory(&matrix),
        tol,
    ) {
        Ok(v) => v,
        Err(code) => return code,
    };

    let report = match branch {
        AnalyzeMode::Idempotent => match analyze_idempotent(&matrix, tol) {
            Ok(analysis) => AnalysisReport::from_idempotent(
                &matrix,
                &analysis,
                res_invol,
                tol,
                start.elapsed().as_secs_f64() * 1e3,
            ),
            Err(err) => {
                eprintln!("error: {}", err);
                return exit_code_for(&err);
            }
        },
        _ => {
            let half = match matrix
                .scale_re(0.5 * sign.value())
                .add(&Matrix::identity(matrix.rows()).scale_re(0.5))
            {
                Ok(m) => m,
                Err(err) => {
                    eprintln!("error: {}", err);
                    return exit_code_for(&err);
                }
            };
            let outcome = analyze_idempotent(&half, tol)
                .and_then(|analysis| involutory_svd_with(&matrix, sign, tol).map(|isvd| (analysis, isvd)));
            match outcome {
                Ok((analysis, isvd)) => {
                    let idem_res = analysis.idempotency_residual;
                    AnalysisReport::from_involutory(
                        &matrix,
                        sign,
                        &isvd,
                        &analysis,
                        half.frobenius_norm(),
                        idem_res,
                        res_invol,
                        tol,
                        start.elapsed().as_secs_f64() * 1e3,
                    )
                }
                Err(err) => {
                    eprintln!("error: {}", err);
                    return exit_code_for(&err);
                }
            }
        }
    };

    if json {
        println!("{}", report.render_json());
    } else {
        print!("{}", report.render_text());
    }
    if report.all_passed {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

/// One verified invariant: measured value against its gate.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub name: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CheckLine {
    fn new(name: impl Into<String>, value: f64, tol: f64) -> Self {
        let pass = value <= tol;
        CheckLine {
            name: name.into(),
            value,
            tol,
            pass,
        }
    }

    fn render(&self) -> String {
        format!(
            "[{}] {:<38} {:>12.3e}  (tol {:.3e})",
            if self.pass { "pass" } else { "FAIL" },
            self.name,
            self.value,
            self.tol
        )
    }
}

fn column_gap(a: &Matrix, b: &Matrix, lo: usize, hi: usize) -> f64 {
    let mut dev = 0.0f64;
    for j in lo..hi {
        for i in 0..a.rows() {
            dev = dev.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    dev
}

/// The invariant suite for one idempotent matrix.
pub fn verify_idempotent_checks(m: &Matrix, tol: &Tolerances) -> Result<Vec<CheckLine>> {
    let analysis = analyze_idempotent(m, tol)?;
    let n = m.rows();
    let ssvd = &analysis.ssvd;
    let (r, t) = (ssvd.counts.r, ssvd.counts.t);
    let m_norm = m.frobenius_norm();
    let rec_tol = tol.rec_tol(m_norm);
    let mut lines = Vec::new();

    lines.push(CheckLine::new("idempotency residual", analysis.idempotency_residual, tol.idem));
    lines.push(CheckLine::new("svd reconstruction", analysis.reconstruction_residual, rec_tol));
    lines.push(CheckLine::new("schur similarity", analysis.schur_residual, rec_tol));

    // u_j^H v_j = 1/sigma_j and diagonality of U_r^H V_r.
    let ur = ssvd.u.column_block(0, r);
    let vr = ssvd.v.column_block(0, r);
    let prod = ur.adjoint().matmul(&vr)?;
    let mut lemma_dev = 0.0f64;
    let mut off_mass = 0.0f64;
    for i in 0..r {
        for j in 0..r {
            if i == j {
                lemma_dev = lemma_dev.max((prod[(i, i)].re - 1.0 / ssvd.sigma[i]).abs().max(prod[(i, i)].im.abs()));
            } else {
                off_mass += prod[(i, j)].norm_sqr();
            }
        }
    }
    lines.push(CheckLine::new("coupling products u_j^H v_j", lemma_dev, 1e-9));
    lines.push(CheckLine::new("U_r^H V_r off-diagonal mass", off_mass.sqrt(), 1e-8));

    lines.push(CheckLine::new(
        "unit-class column agreement",
        column_gap(&ssvd.u, &ssvd.v, t, r),
        1e-8,
    ));

    // tan psi_j vs sqrt(sigma_j^2 - 1), relative.
    let mut angle_dev = 0.0f64;
    for j in 0..t {
        let tau = analysis.canonical.tau[j];
        let alt = (ssvd.sigma[j] * ssvd.sigma[j] - 1.0).max(0.0).sqrt();
        angle_dev = angle_dev.max((tau - alt).abs() / tau.max(1.0));
    }
    lines.push(CheckLine::new("tangent consistency", angle_dev, 1e-9));

    // Independent principal angles.
    let pa = principal_angles_with(m, tol)?;
    let mut pa_dev = 0.0f64;
    for (a, b) in pa.iter().zip(ssvd.angles.psi()) {
        pa_dev = pa_dev.max((a - b).abs());
    }
    lines.push(CheckLine::new("principal angle cross-check", pa_dev, 1e-8));

    // W-form: M = W (O S) W^H with W = V (I ⊕ E).
    let mut scale = vec![1.0; n];
    for (j, &e) in analysis.coupling.signs.iter().enumerate() {
        scale[n - t + j] = e;
    }
    let w = ssvd.v.matmul(&Matrix::diag(&scale))?;
    let os = analysis.coupling.o.matmul(&Matrix::diag(&ssvd.sigma))?;
    let wform = w.matmul(&os)?.matmul(&w.adjoint())?;
    lines.push(CheckLine::new(
        "w-form reconstruction",
        wform.sub(m)?.frobenius_norm(),
        1e-8 * m_norm.max(f64::MIN_POSITIVE),
    ));

    // Oracle equivalence.
    let oracle = svd_oracle(m);
    let mut gap = 0.0f64;
    for (a, b) in ssvd.sigma.iter().zip(&oracle.sigma) {
        gap = gap.max((a - b).abs());
    }
    let sigma1 = ssvd.sigma.first().copied().unwrap_or(0.0);
    lines.push(CheckLine::new("oracle sigma gap", gap, ORACLE_GAP_RTOL * sigma1.max(1.0)));

    // Nonzero singular values of X equal the tangents.
    let x_svd = svd_oracle(&analysis.x_block);
    let mut x_dev = 0.0f64;
    for (j, &sx) in x_svd.sigma.iter().enumerate() {
        let expect = if j < t { analysis.canonical.tau[j] } else { 0.0 };
        x_dev = x_dev.max((sx - expect).abs());
    }
    lines.push(CheckLine::new("X singular values vs tangents", x_dev, 1e-9 * sigma1.max(1.0)));

    // Two-route census agreement is enforced inside the pipeline; record it.
    lines.push(CheckLine::new("census route agreement", 0.0, 0.5));

    Ok(lines)
}

/// The invariant suite for one involutory matrix.
pub fn verify_involutory_checks(b: &Matrix, sign: Sign, tol: &Tolerances) -> Result<Vec<CheckLine>> {
    let n = b.rows();
    let isvd = involutory_svd_with(b, sign, tol)?;
    let m = b.scale_re(0.5 * sign.value()).add(&Matrix::identity(n).scale_re(0.5))?;
    let mut lines = Vec::new();

    lines.push(CheckLine::new("involution residual", validate_involutory(b)?, tol.invol));

    let rebuilt = isvd.u.matmul(&Matrix::diag(&isvd.sigma))?.matmul(&isvd.v.adjoint())?;
    lines.push(CheckLine::new(
        "svd reconstruction",
        rebuilt.sub(b)?.frobenius_norm(),
        tol.rec_tol(b.frobenius_norm()),
    ));

    let pairing = pairing_check_with(&isvd, tol);
    lines.push(CheckLine::new("pair products sigma * 1/sigma", pairing.max_product_deviation, 1e-9));
    lines.push(CheckLine::new(
        "unit pair count",
        (pairing.unit_pairs as f64 - pairing.expected_unit_pairs as f64).abs(),
        0.5,
    ));
    lines.push(CheckLine::new(
        "unpaired unit values",
        (pairing.unpaired as f64 - pairing.expected_unpaired as f64).abs()
            + if pairing.unpaired_all_unit { 0.0 } else { 1.0 },
        0.5,
    ));

    // Angle bridge through the independent principal angles of M.
    let pa = principal_angles_with(&m, tol)?;
    let mut bridge_dev = 0.0f64;
    for (&(large, _), &psi) in isvd.pairing.iter().zip(&pa).take(isvd.counts.t) {
        let sigma_large = isvd.sigma[large];
        let expect = (0.5 * (FRAC_PI_2 + psi)).tan();
        bridge_dev = bridge_dev.max((sigma_large - expect).abs() / expect.max(1.0));
    }
    lines.push(CheckLine::new("angle bridge tan((pi/2+psi)/2)", bridge_dev, 1e-9));

    lines.push(CheckLine::new(
        "tn signed permutation",
        tn_relation_check(&isvd),
        TN_RESIDUAL_SCALE * (n as f64).sqrt(),
    ));

    let oracle = svd_oracle(b);
    let mut gap = 0.0f64;
    for (a, bb) in isvd.sigma.iter().zip(&oracle.sigma) {
        gap = gap.max((a - bb).abs());
    }
    let sigma1 = isvd.sigma.first().copied().unwrap_or(0.0);
    lines.push(CheckLine::new("oracle sigma gap", gap, ORACLE_GAP_RTOL * sigma1.max(1.0)));

    Ok(lines)
}

fn truth_lines(
    truth: &TruthFile,
    counts: (usize, usize, usize, usize, usize),
    psi: &[f64],
    sigma: &[f64],
) -> Vec<CheckLine> {
    let mut lines = Vec::new();
    let (n, r, s, t, nu) = counts;
    let mismatches = [
        truth.n != n,
        truth.r != r,
        truth.s != s,
        truth.t != t,
        truth.nu != nu,
    ]
    .iter()
    .filter(|&&x| x)
    .count();
    lines.push(CheckLine::new("truth census match", mismatches as f64, 0.5));
    let mut psi_dev = 0.0f64;
    for (j, &want) in truth.psi.iter().enumerate() {
        let got = psi.get(j).copied().unwrap_or(f64::NAN);
        psi_dev = psi_dev.max((got - want).abs());
    }
    lines.push(CheckLine::new("truth angle match", psi_dev, 1e-8));
    let sigma1 = truth.sigma.first().copied().unwrap_or(0.0);
    let mut sigma_dev = 0.0f64;
    for (j, &want) in truth.sigma.iter().enumerate() {
        let got = sigma.get(j).copied().unwrap_or(f64::NAN);
        sigma_dev = sigma_dev.max((got - want).abs());
    }
    lines.push(CheckLine::new("truth sigma match", sigma_dev, 1e-9 * sigma1.max(1.0)));
    lines
}

/// `verify <input>`: one line per invariant, exit 0 iff all pass.
pub fn run_verify_file(path: &Path, mode: AnalyzeMode, sign: Sign, tol: &Tolerances) -> i32 {
    let matrix = match read_matrix(path) {
        Ok(m) => m,
        Err(err) => {
            eprintln!("error: {}", err);
            return exit_code_for(&err);
        }
    };
    let (branch, _, _) = match classify(
        mode,
        validate_idempotent(&matrix),
        validate_involutory(&matrix),
        tol,
    ) {
        Ok(v) => v,
        Err(code) => return code,
    };

    let truth = {
        let tp = truth_sidecar_path(path);
        if tp.exists() {
            match std::fs::read_to_string(&tp).map_err(Error::from).and_then(|s| parse_truth(&s)) {
                Ok(t) => Some(t),
                Err(err) => {
                    eprintln!("warning: ignoring unreadable truth sidecar: {}", err);
                    None
                }
            }
        } else {
            None
        }
    };

    let lines = match branch {
        AnalyzeMode::Idempotent => verify_idempotent_checks(&matrix, tol).map(|mut lines| {
            if let Some(truth) = &truth {
                // Recompute cheap summaries for the truth comparison.
                if let Ok(analysis) = analyze_idempotent(&matrix, tol) {
                    let c = analysis.ssvd.counts;
                    lines.extend(truth_lines(
                        truth,
                        (c.n, c.r, c.s, c.t, c.nu),
                        analysis.ssvd.angles.psi(),
                        &analysis.ssvd.sigma,
                    ));
                }
            }
            lines
        }),
        _ => verify_involutory_checks(&matrix, sign, tol).map(|mut lines| {
            if let Some(truth) = &truth {
                if let Ok(isvd) = involutory_svd_with(&matrix, sign, tol) {
                    let c = isvd.counts;
                    let psi: Vec<f64> = isvd.phi.iter().take(c.t).map(|&p| 2.0 * p - FRAC_PI_2).collect();
                    lines.extend(truth_lines(truth, (c.n, c.r, c.s, c.t, c.nu), &psi, &isvd.sigma));
                }
            }
            lines
        }),
    };

    match lines {
        Ok(lines) => {
            let mut all = true;
            for line in &lines {
                println!("{}", line.render());
                all &= line.pass;
            }
            if all {
                println!("verify: all {} checks passed", lines.len());
                EXIT_OK
            } else {
                println!("verify: FAILURES present");
                EXIT_CHECK_FAILED
            }
        }
        Err(err) => {
            eprintln!("error: {}", err);
            exit_code_for(&err)
        }
    }
}

/// Parameters of `--sweep n=..,count=..,seed=..`.
#[derive(Debug, Clone, Copy)]
pub struct SweepParams {
    pub n: usize,
    pub count: usize,
    pub seed: u64,
}

impl FromStr for SweepParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut n = None;
        let mut count = None;
        let mut seed = 0u64;
        for part in s.split(',') {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("sweep field '{}' is not key=value", part)))?;
            match key.trim() {
                "n" => n = Some(value.parse().map_err(|e| Error::Parse(format!("bad n: {}", e)))?),
                "count" => {
                    count = Some(value.parse().map_err(|e| Error::Parse(format!("bad count: {}", e)))?)
                }
                "seed" => seed = value.parse().map_err(|e| Error::Parse(format!("bad seed: {}", e)))?,
                other => return Err(Error::Parse(format!("unknown sweep key '{}'", other))),
            }
        }
        Ok(SweepParams {
            n: n.ok_or_else(|| Error::Parse("sweep needs n=".into()))?,
            count: count.ok_or_else(|| Error::Parse("sweep needs count=".into()))?,
            seed,
        })
    }
}

/// Draws a random well-conditioned generator prescription.
pub fn random_spec(n: usize, case_seed: u64) -> GeneratorSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(case_seed);
    let r = rng.random_range(0..=n);
    let t_max = r.min(n - r);
    let t = if t_max == 0 { 0 } else { rng.random_range(0..=t_max) };
    let mut psi: Vec<f64> = (0..t).map(|_| rng.random_range(0.05..1.45)).collect();
    psi.sort_by(|a, b| b.partial_cmp(a).unwrap());
    GeneratorSpec::new(n, r, t, psi, case_seed ^ 0x5eed).expect("drawn spec is valid")
}

/// `verify --sweep`: seeded random specs, both kinds verified per case,
/// results emitted in seed order.
pub fn run_verify_sweep(params: SweepParams, tol: &Tolerances) -> i32 {
    let mut failures = 0usize;
    for i in 0..params.count {
        let case_seed = params.seed.wrapping_add(i as u64);
        let spec = random_spec(params.n, case_seed);
        let sign = if i % 2 == 0 { Sign::Plus } else { Sign::Minus };

        let idem_ok = idempotent_from_spec(&spec)
            .and_then(|(m, _, _)| verify_idempotent_checks(&m, tol))
            .map(|lines| lines.iter().all(|l| l.pass));
        let invol_ok = involutory_from_spec(&spec, sign)
            .and_then(|b| verify_involutory_checks(&b, sign, tol))
            .map(|lines| lines.iter().all(|l| l.pass));

        let describe = |r: &std::result::Result<bool, Error>| match r {
            Ok(true) => "ok".to_string(),
            Ok(false) => "FAIL".to_string(),
            Err(e) => format!("ERROR({})", e),
        };
        let ok = matches!(idem_ok, Ok(true)) && matches!(invol_ok, Ok(true));
        println!(
            "case {:>3}: spec={}  idempotent={} involutory={}",
            i,
            spec,
            describe(&idem_ok),
            describe(&invol_ok)
        );
        if !ok {
            failures += 1;
        }
    }
    println!("sweep: {}/{} cases passed", params.count - failures, params.count);
    if failures == 0 {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

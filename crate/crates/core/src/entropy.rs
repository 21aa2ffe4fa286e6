//! Entropy functionals on density matrices and the mutual-entropy degree of
//! entanglement (DEM) between the atom and the field.

use crate::linalg::{partial_trace, DensityMatrix, Subsystem, PSD_TOL};
use crate::model::ClosedFormCoeffs;
use crate::{Error, Result};

/// Eigenvalues at or below this are treated as exact zeros in entropy sums.
pub const CLIP_THRESHOLD: f64 = 1e-12;

/// Slack used by the Araki-Lieb check.
pub const ARAKI_LIEB_SLACK: f64 = 1e-8;

/// Overlap weight on the kernel of the reference state above which the
/// relative entropy is infinite.
const SUPPORT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogBase {
    /// Nats.
    #[default]
    E,
    /// Bits.
    Two,
}

impl LogBase {
    #[inline]
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::E => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

/// `x log x`, zero for `x <= CLIP_THRESHOLD`.
#[inline]
fn x_log_x(x: f64, base: LogBase) -> f64 {
    if x <= CLIP_THRESHOLD {
        0.0
    } else {
        x * base.log(x)
    }
}

/// Shannon entropy of a spectrum with the clipping rules of
/// [`von_neumann_entropy`].
pub fn spectrum_entropy(eigenvalues: &[f64], base: LogBase) -> Result<f64> {
    let mut s = 0.0;
    for &l in eigenvalues {
        if l < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {l:e}")));
        }
        s -= x_log_x(l, base);
    }
    Ok(s.max(0.0))
}

/// `-tr(rho log rho)`
pub fn von_neumann_entropy(rho: &DensityMatrix, base: LogBase) -> Result<f64> {
    spectrum_entropy(&rho.eigensystem()?.values, base)
}

/// `tr sigma (log sigma - log rho)`, `+inf` when the support of `sigma` is
/// not contained in that of `rho`.
pub fn relative_entropy(sigma: &DensityMatrix, rho: &DensityMatrix, base: LogBase) -> Result<f64> {
    if sigma.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "relative entropy of {}-level and {}-level states",
            sigma.dim(),
            rho.dim()
        )));
    }
    let es = sigma.eigensystem()?;
    let er = rho.eigensystem()?;
    let n = sigma.dim();

    let mut cross = 0.0;
    for j in 0..n {
        let mu = er.values[j];
        if mu < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {mu:e}")));
        }
        // <w_j| sigma |w_j> = sum_i lambda_i |<v_i|w_j>|^2
        let mut weight = 0.0;
        for i in 0..n {
            let lambda = es.values[i];
            if lambda <= CLIP_THRESHOLD {
                continue;
            }
            let overlap: num_complex::Complex64 = (0..n).map(|k| es.vectors[(k, i)].conj() * er.vectors[(k, j)]).sum();
            weight += lambda * overlap.norm_sqr();
        }
        if mu <= CLIP_THRESHOLD {
            if weight > SUPPORT_TOL {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        cross += weight * base.log(mu);
    }
    let self_term: f64 = es.values.iter().map(|&l| x_log_x(l, base)).sum();
    Ok(self_term - cross)
}

/// Entropies of a bipartite state and its marginals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub s_atom: f64,
    pub s_field: f64,
    pub s_joint: f64,
    /// `s_atom + s_field - s_joint`
    pub dem: f64,
    pub araki_lieb_ok: bool,
    /// `(s_joint - |s_atom - s_field|, s_atom + s_field - s_joint)`; both are
    /// non-negative exactly when the Araki-Lieb bounds hold.
    pub al_margins: (f64, f64),
}

impl EntropyReport {
    pub fn from_entropies(s_atom: f64, s_field: f64, s_joint: f64) -> Self {
        let lower = s_joint - (s_atom - s_field).abs();
        let upper = s_atom + s_field - s_joint;
        EntropyReport {
            s_atom,
            s_field,
            s_joint,
            dem: s_atom + s_field - s_joint,
            araki_lieb_ok: lower >= -ARAKI_LIEB_SLACK && upper >= -ARAKI_LIEB_SLACK,
            al_margins: (lower, upper),
        }
    }
}

/// Mutual entropy of `joint` computed from the spectra of the joint state and
/// both partial traces.
pub fn dem_exact(joint: &DensityMatrix, dims: (usize, usize), base: LogBase) -> Result<EntropyReport> {
    let atom = partial_trace(joint, dims, Subsystem::Atom)?;
    let field = partial_trace(joint, dims, Subsystem::Field)?;
    let s_atom = von_neumann_entropy(&atom, base)?;
    let s_field = von_neumann_entropy(&field, base)?;
    let s_joint = von_neumann_entropy(joint, base)?;
    Ok(EntropyReport::from_entropies(s_atom, s_field, s_joint))
}

/// `-e1 log e1 - e4 log e4 + |e2| log |e2| + |e3| log |e3|`
pub fn dem_closed_form(coeffs: &ClosedFormCoeffs, base: LogBase) -> f64 {
    -x_log_x(coeffs.e1, base) - x_log_x(coeffs.e4, base) + x_log_x(coeffs.e2_mag, base) + x_log_x(coeffs.e3_mag, base)
}

/// Evaluates `|S_A - S_F| <= S <= S_A + S_F` with [`ARAKI_LIEB_SLACK`].
pub fn araki_lieb_check(joint: &DensityMatrix, dims: (usize, usize), base: LogBase) -> Result<(bool, (f64, f64))> {
    let report = dem_exact(joint, dims, base)?;
    Ok((report.araki_lieb_ok, report.al_margins))
}

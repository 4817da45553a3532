use crate::fespace::Tensor;

/// Constitutive law entering the compliance operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Material {
    /// Lamé pair: shear modulus `mu > 0` and first parameter `lambda >= 0`.
    Lame { mu: f64, lambda: f64 },
    /// Incompressible limit (`lambda -> infinity`, `mu = 1`), i.e. the
    /// Stokes problem.
    StokesLimit,
}

impl Material {
    pub fn lame(mu: f64, lambda: f64) -> crate::Result<Self> {
        if !(mu > 0.0) || !(lambda >= 0.0) || !mu.is_finite() || !lambda.is_finite() {
            return Err(crate::Error::InvalidArgument(format!(
                "Lamé parameters need mu > 0, lambda >= 0 (got mu = {mu}, lambda = {lambda})"
            )));
        }
        Ok(Material::Lame { mu, lambda })
    }

    /// `(scale, trace_coefficient)` such that `A tau = scale * (tau - trace_coefficient * tr(tau) I)`.
    fn coefficients(&self) -> (f64, f64) {
        const D: f64 = 2.0;
        match *self {
            Material::Lame { mu, lambda } => (1.0 / (2.0 * mu), lambda / (2.0 * mu + D * lambda)),
            Material::StokesLimit => (0.5, 0.5),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Material::Lame { mu, lambda } => format!("lame:{mu},{lambda}"),
            Material::StokesLimit => "stokes".into(),
        }
    }
}

impl std::str::FromStr for Material {
    type Err = crate::Error;

    /// Parses `stokes` or `lame:MU,LAMBDA`.
    fn from_str(s: &str) -> crate::Result<Self> {
        if s.eq_ignore_ascii_case("stokes") {
            return Ok(Material::StokesLimit);
        }
        let bad = || crate::Error::InvalidArgument(format!("material '{s}' is not 'stokes' or 'lame:MU,LAMBDA'"));
        let rest = s.strip_prefix("lame:").ok_or_else(bad)?;
        let (mu, lambda) = rest.split_once(',').ok_or_else(bad)?;
        Material::lame(mu.trim().parse().map_err(|_| bad())?, lambda.trim().parse().map_err(|_| bad())?)
    }
}

/// Compliance tensor applied to `tau`.
pub fn compliance_apply(tau: &Tensor, material: &Material) -> Tensor {
    let (scale, tc) = material.coefficients();
    let tr = tau[0][0] + tau[1][1];
    [[scale * (tau[0][0] - tc * tr), scale * tau[0][1]], [scale * tau[1][0], scale * (tau[1][1] - tc * tr)]]
}

pub fn symgrad(grad: &Tensor) -> Tensor {
    let off = 0.5 * (grad[0][1] + grad[1][0]);
    [[grad[0][0], off], [off, grad[1][1]]]
}

/// Skew-symmetric part `(tau - tau^T) / 2`.
pub fn skew(tau: &Tensor) -> Tensor {
    let off = 0.5 * (tau[0][1] - tau[1][0]);
    [[0.0, off], [-off, 0.0]]
}

/// `chi * psi` with `chi = [[0, -1], [1, 0]]`.
pub fn chi(psi: f64) -> Tensor {
    [[0.0, -psi], [psi, 0.0]]
}

/// Frobenius inner product.
pub fn inner(a: &Tensor, b: &Tensor) -> f64 {
    a[0][0] * b[0][0] + a[0][1] * b[0][1] + a[1][0] * b[1][0] + a[1][1] * b[1][1]
}

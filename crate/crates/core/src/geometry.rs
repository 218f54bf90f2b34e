//! RIS layout, link endpoints and the near-field (Rayleigh) bound.
//!
//! The surface lies in the `yz`-plane with its centre element at the origin.
//! Element `(m, n)` sits at `(0, n·d, m·d)` with `m ∈ {0, ±1, …, ±(M−1)/2}`
//! and `n ∈ {0, ±1, …, ±(N−1)/2}`, so both dimensions have to be odd.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3 {
    pub const ORIGIN: Position3 = Position3::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Distance to the RIS centre.
    pub fn norm(&self) -> f64 {
        distance(self, &Self::ORIGIN)
    }
}

impl From<[f64; 3]> for Position3 {
    fn from(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

pub fn distance(p: &Position3, q: &Position3) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    let dz = p.z - q.z;
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Signed grid index of an element: `row` is `m` (z axis), `col` is `n` (y axis).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementIndex {
    pub row: i32,
    pub col: i32,
}

impl ElementIndex {
    pub const CENTER: ElementIndex = ElementIndex::new(0, 0);

    pub const fn new(row: i32, col: i32) -> Self {
        Self { row, col }
    }
}

impl fmt::Display for ElementIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.col)
    }
}

/// Reflection coefficient `a·exp(jφ)` of a single element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflection {
    amplitude: f64,
    phase: f64,
}

impl Reflection {
    pub const UNIT: Reflection = Reflection {
        amplitude: 1.0,
        phase: 0.0,
    };
    pub const OFF: Reflection = Reflection {
        amplitude: 0.0,
        phase: 0.0,
    };

    /// `amplitude` must lie in `[0, 1]`; `phase` is wrapped into `[0, 2π)`.
    pub fn new(amplitude: f64, phase: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&amplitude) {
            return Err(Error::InvalidParameter {
                name: "amplitude",
                reason: format!("{amplitude} is outside [0, 1]"),
            });
        }
        if !phase.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phase",
                reason: format!("{phase} is not finite"),
            });
        }
        Ok(Self {
            amplitude,
            phase: wrap_phase(phase),
        })
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    pub fn coefficient(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.phase)
    }
}

/// Wraps an angle into `[0, 2π)`.
pub(crate) fn wrap_phase(phase: f64) -> f64 {
    let w = phase.rem_euclid(2.0 * PI);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if w >= 2.0 * PI {
        0.0
    } else {
        w
    }
}

/// `M×N` element grid with per-element reflection coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct RisTopology {
    rows: usize,
    cols: usize,
    spacing: f64,
    // row-major, m ascending then n ascending
    reflections: Vec<Reflection>,
}

impl RisTopology {
    /// Builds a grid with unit reflection amplitude and zero phase everywhere.
    pub fn new(rows: usize, cols: usize, spacing: f64) -> Result<Self> {
        if rows == 0 || cols == 0 || rows.is_multiple_of(2) || cols.is_multiple_of(2) {
            return Err(Error::EvenDimension { rows, cols });
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::NonPositiveSpacing(spacing));
        }
        i32::try_from(rows.max(cols)).map_err(|_| Error::InvalidParameter {
            name: "dimensions",
            reason: format!("{rows}x{cols} is too large"),
        })?;
        Ok(Self {
            rows,
            cols,
            spacing,
            reflections: vec![Reflection::UNIT; rows * cols],
        })
    }

    /// Grid with half-wavelength spacing for the carrier of `config`.
    pub fn half_wavelength(rows: usize, cols: usize, config: &SystemConfig) -> Result<Self> {
        Self::new(rows, cols, config.wavelength() / 2.0)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of elements `Q = M·N`.
    pub fn element_count(&self) -> usize {
        self.reflections.len()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    fn half_rows(&self) -> i32 {
        (self.rows as i32 - 1) / 2
    }

    fn half_cols(&self) -> i32 {
        (self.cols as i32 - 1) / 2
    }

    /// Row-major storage slot of an index, `None` when it is off the grid.
    pub fn slot(&self, index: ElementIndex) -> Option<usize> {
        let (hm, hn) = (self.half_rows(), self.half_cols());
        if index.row.abs() > hm || index.col.abs() > hn {
            return None;
        }
        let r = (index.row + hm) as usize;
        let c = (index.col + hn) as usize;
        Some(r * self.cols + c)
    }

    pub fn contains(&self, index: ElementIndex) -> bool {
        self.slot(index).is_some()
    }

    /// All element indices in row-major order.
    pub fn indices(&self) -> impl Iterator<Item = ElementIndex> + '_ {
        let (hm, hn) = (self.half_rows(), self.half_cols());
        (-hm..=hm).flat_map(move |m| (-hn..=hn).map(move |n| ElementIndex::new(m, n)))
    }

    /// Position `(0, n·d, m·d)`; the index is not range-checked.
    pub fn position(&self, index: ElementIndex) -> Position3 {
        Position3::new(
            0.0,
            index.col as f64 * self.spacing,
            index.row as f64 * self.spacing,
        )
    }

    pub fn reflection(&self, index: ElementIndex) -> Option<Reflection> {
        self.slot(index).map(|s| self.reflections[s])
    }

    pub fn set_reflection(&mut self, index: ElementIndex, reflection: Reflection) -> Result<()> {
        let slot = self.slot(index).ok_or(Error::UnknownIndex(index))?;
        self.reflections[slot] = reflection;
        Ok(())
    }

    /// Applies the same reflection coefficient to every element.
    pub fn set_all(&mut self, reflection: Reflection) {
        self.reflections.fill(reflection);
    }

    /// Largest inter-element distance `D = d·√((M−1)² + (N−1)²)`.
    pub fn aperture(&self) -> f64 {
        let m = (self.rows - 1) as f64;
        let n = (self.cols - 1) as f64;
        self.spacing * (m * m + n * n).sqrt()
    }

    /// Endpoint distance bound `d·[(M−1)² + (N−1)²]`. It coincides with
    /// [`rayleigh_distance`] when `d = λ/2`.
    pub fn near_field_bound(&self) -> f64 {
        let m = (self.rows - 1) as f64;
        let n = (self.cols - 1) as f64;
        self.spacing * (m * m + n * n)
    }
}

/// `d_R = 2D²/λ`.
pub fn rayleigh_distance(topology: &RisTopology, wavelength: f64) -> f64 {
    let d = topology.aperture();
    2.0 * d * d / wavelength
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DelayModel {
    /// Propagation delay only.
    #[default]
    Approximate,
    /// Adds the delay `λφ/(2π c₀)` induced by the element phase shift.
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NearFieldPolicy {
    #[default]
    Warn,
    Strict,
}

/// Physical parameters of the link.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    carrier_hz: f64,
    bandwidth_hz: f64,
    power_w: f64,
    noise_variance: f64,
    tx: Position3,
    rx: Position3,
    speed_of_light: f64,
    delay_model: DelayModel,
    near_field_policy: NearFieldPolicy,
}

impl Default for SystemConfig {
    /// 10 GHz carrier, 2 GHz bandwidth, 30 dBm, unit noise variance,
    /// Tx at (2, 2, 0) and Rx at (2, −2, 0).
    fn default() -> Self {
        Self {
            carrier_hz: 10e9,
            bandwidth_hz: 2e9,
            power_w: 1.0,
            noise_variance: 1.0,
            tx: Position3::new(2.0, 2.0, 0.0),
            rx: Position3::new(2.0, -2.0, 0.0),
            speed_of_light: SPEED_OF_LIGHT,
            delay_model: DelayModel::Approximate,
            near_field_policy: NearFieldPolicy::Warn,
        }
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("{value} must be positive and finite"),
        })
    }
}

fn check_endpoint(name: &'static str, p: Position3) -> Result<Position3> {
    if !p.is_finite() {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("{p:?} has non-finite components"),
        });
    }
    if p.x <= 0.0 {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("x = {} must be positive (endpoints face the RIS)", p.x),
        });
    }
    Ok(p)
}

impl SystemConfig {
    pub fn new(
        carrier_hz: f64,
        bandwidth_hz: f64,
        power_w: f64,
        noise_variance: f64,
        tx: Position3,
        rx: Position3,
    ) -> Result<Self> {
        Ok(Self {
            carrier_hz: check_positive("carrier_frequency_hz", carrier_hz)?,
            bandwidth_hz: check_positive("bandwidth_hz", bandwidth_hz)?,
            power_w: check_positive("transmit_power_w", power_w)?,
            noise_variance: check_positive("noise_variance", noise_variance)?,
            tx: check_endpoint("tx_position", tx)?,
            rx: check_endpoint("rx_position", rx)?,
            ..Self::default()
        })
    }

    pub fn with_bandwidth(mut self, bandwidth_hz: f64) -> Result<Self> {
        self.bandwidth_hz = check_positive("bandwidth_hz", bandwidth_hz)?;
        Ok(self)
    }

    pub fn with_power_w(mut self, power_w: f64) -> Result<Self> {
        self.power_w = check_positive("transmit_power_w", power_w)?;
        Ok(self)
    }

    pub fn with_noise_variance(mut self, noise_variance: f64) -> Result<Self> {
        self.noise_variance = check_positive("noise_variance", noise_variance)?;
        Ok(self)
    }

    pub fn with_endpoints(mut self, tx: Position3, rx: Position3) -> Result<Self> {
        self.tx = check_endpoint("tx_position", tx)?;
        self.rx = check_endpoint("rx_position", rx)?;
        Ok(self)
    }

    /// Overrides `c₀`. Only meant for sensitivity studies.
    pub fn with_speed_of_light(mut self, c0: f64) -> Result<Self> {
        self.speed_of_light = check_positive("speed_of_light", c0)?;
        Ok(self)
    }

    pub fn with_delay_model(mut self, model: DelayModel) -> Self {
        self.delay_model = model;
        self
    }

    pub fn with_near_field_policy(mut self, policy: NearFieldPolicy) -> Self {
        self.near_field_policy = policy;
        self
    }

    pub fn carrier_hz(&self) -> f64 {
        self.carrier_hz
    }

    pub fn bandwidth_hz(&self) -> f64 {
        self.bandwidth_hz
    }

    pub fn power_w(&self) -> f64 {
        self.power_w
    }

    pub fn noise_variance(&self) -> f64 {
        self.noise_variance
    }

    pub fn tx(&self) -> Position3 {
        self.tx
    }

    pub fn rx(&self) -> Position3 {
        self.rx
    }

    pub fn speed_of_light(&self) -> f64 {
        self.speed_of_light
    }

    pub fn delay_model(&self) -> DelayModel {
        self.delay_model
    }

    pub fn near_field_policy(&self) -> NearFieldPolicy {
        self.near_field_policy
    }

    /// `λ = c₀ / f_c`.
    pub fn wavelength(&self) -> f64 {
        self.speed_of_light / self.carrier_hz
    }
}

/// Outcome of the near-field check for both endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearFieldReport {
    pub bound_m: f64,
    pub tx_distance_m: f64,
    pub rx_distance_m: f64,
    pub tx_inside: bool,
    pub rx_inside: bool,
}

impl NearFieldReport {
    pub fn passed(&self) -> bool {
        self.tx_inside && self.rx_inside
    }
}

/// Checks `‖p_i‖ ≤ d·[(M−1)² + (N−1)²]` for the Tx and the Rx. Under
/// [`NearFieldPolicy::Strict`] a violation is an error, otherwise it is only
/// flagged in the report.
pub fn validate_near_field(
    config: &SystemConfig,
    topology: &RisTopology,
) -> Result<NearFieldReport> {
    let bound_m = topology.near_field_bound();
    let tx_distance_m = config.tx().norm();
    let rx_distance_m = config.rx().norm();
    let report = NearFieldReport {
        bound_m,
        tx_distance_m,
        rx_distance_m,
        tx_inside: tx_distance_m <= bound_m,
        rx_inside: rx_distance_m <= bound_m,
    };
    if config.near_field_policy() == NearFieldPolicy::Strict {
        if !report.tx_inside {
            return Err(Error::OutsideNearField {
                endpoint: "Tx",
                distance_m: tx_distance_m,
                bound_m,
            });
        }
        if !report.rx_inside {
            return Err(Error::OutsideNearField {
                endpoint: "Rx",
                distance_m: rx_distance_m,
                bound_m,
            });
        }
    }
    Ok(report)
}

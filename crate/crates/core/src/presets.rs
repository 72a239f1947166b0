//! The eight reference examples: seed parameters, initial data and
//! expected long-time behavior.
//!
//! Multipliers are stored as `scale * exp(2 pi i q / p)` with integer `q`,
//! `p`; the complex value is always computed, never typed in.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;
// Float math for no_std builds; the std inherent methods shadow it in tests.
#[allow(unused_imports)]
use num_traits::Float;

use crate::engine::{descend_initial, GenerationSpec, OrderingRule};
use crate::numerics::RootSet;
use crate::seeds::{RationalRotation, SecondOrderParams, SeedSpec};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Preset {
    #[cfg_attr(feature = "serde", serde(rename = "1a"))]
    Ex1a,
    #[cfg_attr(feature = "serde", serde(rename = "1b"))]
    Ex1b,
    #[cfg_attr(feature = "serde", serde(rename = "1c"))]
    Ex1c,
    #[cfg_attr(feature = "serde", serde(rename = "2a"))]
    Ex2a,
    #[cfg_attr(feature = "serde", serde(rename = "2b"))]
    Ex2b,
    #[cfg_attr(feature = "serde", serde(rename = "3a"))]
    Ex3a,
    #[cfg_attr(feature = "serde", serde(rename = "3b"))]
    Ex3b,
    #[cfg_attr(feature = "serde", serde(rename = "4"))]
    Ex4,
}

/// `scale * exp(2 pi i q / p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScaledRotation {
    pub scale: f64,
    pub q: i64,
    pub p: u64,
}

impl ScaledRotation {
    pub const fn unit(q: i64, p: u64) -> Self {
        ScaledRotation { scale: 1.0, q, p }
    }

    pub const fn scaled(scale: f64, q: i64, p: u64) -> Self {
        ScaledRotation { scale, q, p }
    }

    pub fn value(&self) -> Complex64 {
        let r = RationalRotation::new(self.q, self.p).expect("preset rotations are in lowest terms");
        r.value() * self.scale
    }

    pub fn rotation(&self) -> RationalRotation {
        RationalRotation::new(self.q, self.p).expect("preset rotations are in lowest terms")
    }
}

/// Frozen parameter block of one example.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetParams {
    pub a: [ScaledRotation; 2],
    pub b: [f64; 2],
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::Ex1a,
        Preset::Ex1b,
        Preset::Ex1c,
        Preset::Ex2a,
        Preset::Ex2b,
        Preset::Ex3a,
        Preset::Ex3b,
        Preset::Ex4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Ex1a => "1a",
            Preset::Ex1b => "1b",
            Preset::Ex1c => "1c",
            Preset::Ex2a => "2a",
            Preset::Ex2b => "2b",
            Preset::Ex3a => "3a",
            Preset::Ex3b => "3b",
            Preset::Ex4 => "4",
        }
    }

    pub fn from_name(name: &str) -> Option<Preset> {
        Preset::ALL.into_iter().find(|p| p.name() == name)
    }

    pub fn params(self) -> PresetParams {
        use ScaledRotation as R;
        match self {
            Preset::Ex1a | Preset::Ex2a | Preset::Ex3a => PresetParams {
                a: [R::unit(1, 3), R::unit(2, 5)],
                b: [1.0, 2.0],
            },
            Preset::Ex1b | Preset::Ex2b | Preset::Ex3b => PresetParams {
                a: [R::unit(1, 7), R::scaled(0.9, 2, 5)],
                b: [0.1, 0.2],
            },
            Preset::Ex1c => PresetParams {
                a: [R::scaled(0.1, 1, 3), R::unit(1, 25)],
                b: [1.0, 1.0],
            },
            Preset::Ex4 => PresetParams {
                a: [R::unit(1, 2), R::unit(1, 4)],
                b: [1.0, 2.0],
            },
        }
    }

    /// Number of lifts above generation zero.
    pub fn depth(self) -> usize {
        match self {
            Preset::Ex2a | Preset::Ex2b => 1,
            Preset::Ex3a | Preset::Ex3b => 2,
            _ => 0,
        }
    }

    pub fn seed(self) -> SeedSpec {
        let p = self.params();
        let a = vec![p.a[0].value(), p.a[1].value()];
        let b = vec![Complex64::new(p.b[0], 0.0), Complex64::new(p.b[1], 0.0)];
        let spec = match self {
            Preset::Ex4 => SeedSpec::second_order(2, SecondOrderParams::autonomous(a, b)),
            _ => SeedSpec::affine(a, b),
        };
        spec.expect("preset parameters are well formed")
    }

    /// Initial zero sets of the top generation, `x(0)` (and `x(1)` for the
    /// second-order seed).
    pub fn top_initial(self) -> Vec<RootSet> {
        match self {
            Preset::Ex4 => example4_initial().to_vec(),
            _ => vec![RootSet::new(vec![Complex64::new(-1.0, -1.0), Complex64::new(1.0, 0.0)])],
        }
    }

    /// Generation spec with the lift rules chosen so that the top generation
    /// starts from [`Preset::top_initial`], together with the generation-zero
    /// initial data.
    pub fn build(self) -> Result<(GenerationSpec, Vec<RootSet>)> {
        let top = self.top_initial();
        if self.depth() == 0 {
            return Ok((GenerationSpec::generation_zero(self.seed()), top));
        }
        let (bottom, rules) = descend_initial(&top[0], self.depth())?;
        Ok((GenerationSpec::new(self.seed(), rules)?, vec![bottom]))
    }

    /// Ordering used when presenting the top generation as a vector.
    pub fn presentation(self) -> OrderingRule {
        match self {
            Preset::Ex1c => OrderingRule::Contiguity,
            _ => OrderingRule::Lexicographic,
        }
    }

    /// The period the zeros settle into.
    pub fn expected_period(self) -> usize {
        match self {
            Preset::Ex1a | Preset::Ex2a | Preset::Ex3a => 15,
            Preset::Ex1b | Preset::Ex2b | Preset::Ex3b => 7,
            Preset::Ex1c => 25,
            Preset::Ex4 => 8,
        }
    }

    /// Whether the period is only approached as time grows.
    pub fn asymptotic(self) -> bool {
        matches!(self, Preset::Ex1b | Preset::Ex1c | Preset::Ex2b | Preset::Ex3b)
    }

    /// Last time step shown in figures.
    pub fn plot_steps(self) -> usize {
        match self {
            Preset::Ex1a => 15,
            Preset::Ex1c => 25,
            Preset::Ex2a | Preset::Ex3a => 30,
            Preset::Ex1b | Preset::Ex2b | Preset::Ex3b => 70,
            Preset::Ex4 => 32,
        }
    }

    /// Whether the figures include a complex-plane scatter.
    pub fn has_plane_plot(self) -> bool {
        matches!(self, Preset::Ex1a | Preset::Ex1c)
    }

    /// Steps needed for the expected period to be detectable.
    pub fn analysis_steps(self) -> usize {
        if self.asymptotic() {
            200
        } else {
            3 * self.expected_period()
        }
    }
}

impl core::fmt::Display for Preset {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// `x(0) = {x_1(0), 1}`, `x(1) = {x_1(1), 1}` of the second-order example,
/// with `gamma = exp(i atan(4) / 2)` and principal fourth roots.
pub fn example4_initial() -> [RootSet; 2] {
    let one = Complex64::new(1.0, 0.0);
    let gamma = Complex64::from_polar(1.0, 4.0f64.atan() / 2.0);
    let r17 = Complex64::new(17.0f64.powf(0.25), 0.0);
    let root3 = 3.0f64.powf(0.25);
    // principal (-3)^(1/4)
    let m3 = Complex64::from_polar(root3, PI / 4.0);
    let x10 = -(r17 + gamma) / (r17 + Complex64::new(1.0, 2.0) * gamma - 2.0 * m3 * gamma);
    let x11 = (Complex64::new(1.0, 1.0) - Complex64::from_polar(root3, PI / 4.0)) * x10;
    [RootSet::new(vec![x10, one]), RootSet::new(vec![x11, one])]
}

//! C₂ᵥ irreducible representations of the 4π-periodic pendulum and their
//! C_i correlation for the hyperbolic system.
//!
//! The symmetry group is generated by the rotation R(2π) (θ → θ + 2π,
//! distinguishable because the natural period here is 4π) and the two
//! reflections P(0): θ → −θ and P(π): θ → 2π − θ. Character table:
//!
//! ```text
//!        E    R(2π)   P(0)   P(π)
//! A1     1      1       1      1
//! B1     1     −1       1     −1
//! B2     1     −1      −1      1
//! A2     1      1      −1     −1
//! ```
//!
//! Under θ → ix only inversion survives; A1, B1 collapse onto A′ and
//! B2, A2 onto A″.

use serde::{Deserialize, Serialize};

/// C₂ᵥ irrep label. `ALL` is ordered A1, B1, B2, A2 — the order blocks are
/// conventionally listed in and the energy-ordering pattern cycles through.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Irrep {
    A1,
    B1,
    B2,
    A2,
}

/// C_i label of a hyperbolic state: parity even (A′) or odd (A″).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CiLabel {
    APrime,
    ADoublePrime,
}

/// Periodicity class under R(2π): A irreps are 2π-periodic, B antiperiodic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PeriodicityClass {
    A,
    B,
}

/// Characters under {E, R(2π), P(0), P(π)} as ±1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Characters {
    pub e: i8,
    pub r2pi: i8,
    pub p0: i8,
    pub ppi: i8,
}

impl Irrep {
    pub const ALL: [Irrep; 4] = [Irrep::A1, Irrep::B1, Irrep::B2, Irrep::A2];

    pub fn characters(self) -> Characters {
        let (r2pi, p0, ppi) = match self {
            Irrep::A1 => (1, 1, 1),
            Irrep::B1 => (-1, 1, -1),
            Irrep::B2 => (-1, -1, 1),
            Irrep::A2 => (1, -1, -1),
        };
        Characters { e: 1, r2pi, p0, ppi }
    }

    /// Reconstruct the irrep from its R(2π) and P(0) characters; the P(π)
    /// character is their product and carries no extra information.
    pub fn from_characters(r2pi: i8, p0: i8) -> Option<Irrep> {
        Irrep::ALL
            .into_iter()
            .find(|g| g.characters().r2pi == r2pi && g.characters().p0 == p0)
    }

    pub fn class(self) -> PeriodicityClass {
        match self {
            Irrep::A1 | Irrep::A2 => PeriodicityClass::A,
            Irrep::B1 | Irrep::B2 => PeriodicityClass::B,
        }
    }

    /// C_i correlation: A1, B1 → A′ and B2, A2 → A″.
    pub fn ci_label(self) -> CiLabel {
        match self {
            Irrep::A1 | Irrep::B1 => CiLabel::APrime,
            Irrep::B2 | Irrep::A2 => CiLabel::ADoublePrime,
        }
    }

    /// κ parity that closes a finite block in this irrep: odd for A1/A2,
    /// even for B1/B2.
    pub fn kappa_parity_matches(self, kappa: u64) -> bool {
        match self.class() {
            PeriodicityClass::A => kappa % 2 == 1,
            PeriodicityClass::B => kappa % 2 == 0,
        }
    }

    /// Smallest κ with a nonempty analytic block: 1 (A1), 2 (B1/B2), 3 (A2).
    pub fn min_kappa(self) -> u64 {
        match self {
            Irrep::A1 => 1,
            Irrep::B1 | Irrep::B2 => 2,
            Irrep::A2 => 3,
        }
    }

    /// Free-rotor quantum numbers ν (with E = (ν/2)²) that land in this
    /// irrep below the C-QES ceiling: 0 ≤ ν ≤ κ−1, even ν for A, odd for B;
    /// ν = 0 belongs to A1 alone.
    pub fn field_free_nu(self, kappa: u64) -> Vec<u64> {
        let start = match self {
            Irrep::A1 => 0,
            Irrep::B1 | Irrep::B2 => 1,
            Irrep::A2 => 2,
        };
        (start..kappa).step_by(2).collect()
    }
}

impl std::fmt::Display for Irrep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Irrep::A1 => write!(f, "A1"),
            Irrep::B1 => write!(f, "B1"),
            Irrep::B2 => write!(f, "B2"),
            Irrep::A2 => write!(f, "A2"),
        }
    }
}

impl std::str::FromStr for Irrep {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(Irrep::A1),
            "B1" => Ok(Irrep::B1),
            "B2" => Ok(Irrep::B2),
            "A2" => Ok(Irrep::A2),
            _ => Err(format!("unknown irrep '{s}' (expected A1, B1, B2 or A2)")),
        }
    }
}

impl std::fmt::Display for PeriodicityClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PeriodicityClass::A => write!(f, "A-class"),
            PeriodicityClass::B => write!(f, "B-class"),
        }
    }
}

impl std::fmt::Display for CiLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CiLabel::APrime => write!(f, "A'"),
            CiLabel::ADoublePrime => write!(f, "A\""),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn character_table_is_orthogonal() {
        // Row orthogonality over the four group elements.
        for a in Irrep::ALL {
            for b in Irrep::ALL {
                let ca = a.characters();
                let cb = b.characters();
                let dot = (ca.e * cb.e + ca.r2pi * cb.r2pi + ca.p0 * cb.p0 + ca.ppi * cb.ppi)
                    as i32;
                assert_eq!(dot, if a == b { 4 } else { 0 }, "rows {a} and {b}");
            }
        }
    }

    #[test]
    fn ppi_character_is_product_of_the_other_two() {
        for g in Irrep::ALL {
            let c = g.characters();
            assert_eq!(c.ppi, c.r2pi * c.p0, "{g}: P(pi) = R(2pi)·P(0)");
        }
    }

    #[test]
    fn characters_round_trip() {
        for g in Irrep::ALL {
            let c = g.characters();
            assert_eq!(Irrep::from_characters(c.r2pi, c.p0), Some(g));
        }
    }

    #[test]
    fn field_free_nu_from_the_free_rotor_correlation() {
        assert_eq!(Irrep::A1.field_free_nu(5), vec![0, 2, 4]);
        assert_eq!(Irrep::A2.field_free_nu(5), vec![2, 4]);
        assert_eq!(Irrep::B1.field_free_nu(2), vec![1]);
        assert_eq!(Irrep::B2.field_free_nu(6), vec![1, 3, 5]);
    }
}

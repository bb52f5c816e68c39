//! Initial data for the test problems.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scheme::{Boundary, Field, Grid};
use crate::state::{admissibility, Primitive, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CaseId {
    Accuracy,
    BrioWu,
    RyuJones,
    Superfast,
    Rp4,
    Rp5,
    Rp6,
    Rp7,
    OrszagTang,
}

impl CaseId {
    pub const ALL: [CaseId; 9] = [
        CaseId::Accuracy,
        CaseId::BrioWu,
        CaseId::RyuJones,
        CaseId::Superfast,
        CaseId::Rp4,
        CaseId::Rp5,
        CaseId::Rp6,
        CaseId::Rp7,
        CaseId::OrszagTang,
    ];

    /// The seven shock tubes in order RP1..RP7.
    pub const RIEMANN: [CaseId; 7] =
        [CaseId::BrioWu, CaseId::RyuJones, CaseId::Superfast, CaseId::Rp4, CaseId::Rp5, CaseId::Rp6, CaseId::Rp7];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Accuracy => "accuracy",
            CaseId::BrioWu => "brio_wu",
            CaseId::RyuJones => "ryu_jones",
            CaseId::Superfast => "superfast",
            CaseId::Rp4 => "rp4",
            CaseId::Rp5 => "rp5",
            CaseId::Rp6 => "rp6",
            CaseId::Rp7 => "rp7",
            CaseId::OrszagTang => "orszag_tang",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let alias = match key.as_str() {
            "rp1" => "brio_wu",
            "rp2" => "ryu_jones",
            "rp3" => "superfast",
            k => k,
        };
        CaseId::ALL.into_iter().find(|c| c.name() == alias).ok_or_else(|| Error::UnknownCase(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum InitialData {
    /// Two constant states split at `x_jump`; cells with centre <= x_jump take the left state.
    Riemann { left: Primitive, right: Primitive, x_jump: f64 },
    /// Advected density sine wave.
    SmoothWave,
    Vortex,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestCase {
    pub id: CaseId,
    pub x: (f64, f64),
    pub y: Option<(f64, f64)>,
    pub bc: Boundary,
    pub t_final: f64,
    pub data: InitialData,
    pub description: &'static str,
}

// (rho, ux, uy, uz, p_par, p_perp, By, Bz) with a fixed Bx.
fn tube(s: [f64; 8], bx: f64) -> Primitive {
    Primitive { rho: s[0], u: [s[1], s[2], s[3]], p_par: s[4], p_perp: s[5], b: [bx, s[6], s[7]] }
}

impl TestCase {
    pub fn get(id: CaseId) -> Self {
        let r4 = (4.0 * PI).sqrt();
        let riemann = |x: (f64, f64), t_final, l: [f64; 8], r: [f64; 8], bx: f64, x_jump, description| TestCase {
            id,
            x,
            y: None,
            bc: Boundary::Outflow,
            t_final,
            data: InitialData::Riemann { left: tube(l, bx), right: tube(r, bx), x_jump },
            description,
        };
        match id {
            CaseId::Accuracy => TestCase {
                id,
                x: (0.0, 1.0),
                y: None,
                bc: Boundary::Periodic,
                t_final: 2.0,
                data: InitialData::SmoothWave,
                description: "advected density wave, periodic",
            },
            CaseId::BrioWu => riemann(
                (-1.0, 1.0),
                0.2,
                [1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0],
                [0.125, 0.0, 0.0, 0.0, 0.1, 0.1, -1.0, 0.0],
                0.75,
                0.0,
                "RP1 Brio-Wu shock tube",
            ),
            CaseId::RyuJones => riemann(
                (-0.5, 0.5),
                0.2,
                [1.08, 1.2, 0.0, 0.0, 0.95, 0.95, 3.6 / r4, 2.0 / r4],
                [1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 4.0 / r4, 2.0 / r4],
                2.0 / r4,
                0.0,
                "RP2 Ryu-Jones",
            ),
            CaseId::Superfast => riemann(
                (0.0, 1.0),
                0.05,
                [1.0, -3.1, 0.0, 0.0, 1.0, 1.0, 0.5, 0.0],
                [1.0, 3.1, 0.0, 0.0, 1.0, 1.0, 0.5, 0.0],
                0.0,
                0.5,
                "RP3 super-fast expansion",
            ),
            CaseId::Rp4 => riemann(
                (-0.5, 0.5),
                0.15,
                [1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0],
                [0.4, 0.0, 0.0, 0.0, 0.4, 0.4, -1.0, 0.0],
                1.3,
                0.0,
                "RP4",
            ),
            CaseId::Rp5 => riemann(
                (-0.5, 0.5),
                0.15,
                [1.7, 0.0, 0.0, 0.0, 1.7, 1.7, 3.544908 / r4, 0.0],
                [0.2, 0.0, 0.0, -1.496891, 0.2, 0.2, 2.785898 / r4, 2.192064 / r4],
                3.899398 / r4,
                0.0,
                "RP5",
            ),
            CaseId::Rp6 => riemann(
                (-0.5, 0.5),
                0.15,
                [1.0 / (4.0 * PI), -1.0, 1.0, -1.0, 1.0, 1.0, -1.0 / r4, 1.0 / r4],
                [1.0 / (4.0 * PI), -1.0, -1.0, -1.0, 1.0, 1.0, 1.0 / r4, 1.0 / r4],
                1.0 / r4,
                0.0,
                "RP6",
            ),
            CaseId::Rp7 => riemann(
                (-0.5, 0.5),
                0.15,
                [1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0],
                [0.2, 0.0, 0.0, 0.0, 0.1, 0.1, 0.0, 0.0],
                1.0,
                0.0,
                "RP7",
            ),
            CaseId::OrszagTang => TestCase {
                id,
                x: (0.0, 1.0),
                y: Some((0.0, 1.0)),
                bc: Boundary::Periodic,
                t_final: 0.5,
                data: InitialData::Vortex,
                description: "2D Orszag-Tang vortex, periodic",
            },
        }
    }

    pub fn two_d(&self) -> bool {
        self.y.is_some()
    }

    /// Grid with `n` cells per direction.
    pub fn grid(&self, n: usize) -> Grid {
        match self.y {
            Some(y) => Grid::plane(n, n, self.x, y, self.bc),
            None => Grid::line(n, self.x.0, self.x.1, self.bc),
        }
    }

    pub fn primitive_at(&self, x: f64, y: f64) -> Primitive {
        match self.data {
            InitialData::Riemann { left, right, x_jump } => {
                if x <= x_jump {
                    left
                } else {
                    right
                }
            }
            InitialData::SmoothWave => exact_accuracy_solution(x, 0.0),
            InitialData::Vortex => {
                let tp = 2.0 * PI;
                let r4 = (4.0 * PI).sqrt();
                let p = 5.0 / (12.0 * PI);
                Primitive {
                    rho: 25.0 / (36.0 * PI),
                    u: [-(tp * y).sin(), (tp * x).sin(), 0.0],
                    p_par: p,
                    p_perp: p,
                    b: [-(tp * y).sin() / r4, (2.0 * tp * x).sin() / r4, 0.0],
                }
            }
        }
    }
}

/// Initial conserved field of `id` on `grid`.
pub fn init_case(id: CaseId, grid: &Grid) -> Result<Field> {
    let case = TestCase::get(id);
    if case.two_d() != grid.two_d {
        return Err(Error::DimensionMismatch(format!(
            "case {id} is {}D but the grid is {}D",
            if case.two_d() { 2 } else { 1 },
            if grid.two_d { 2 } else { 1 }
        )));
    }
    let mut err = None;
    let field = Field::from_fn(grid, |x, y| {
        let w = case.primitive_at(x, y);
        if err.is_none() {
            if let Err(e) = w.validate() {
                err = Some(e);
            }
        }
        w.to_conserved_unchecked()
    });
    match err {
        Some(e) => Err(e),
        None => Ok(field),
    }
}

/// Exact solution of the accuracy test: the density wave moves right with unit speed.
pub fn exact_accuracy_solution(x: f64, t: f64) -> Primitive {
    Primitive {
        rho: 2.0 + (2.0 * PI * (x - t)).sin(),
        u: [1.0, 0.0, 0.0],
        p_par: 1.0,
        p_perp: 1.0,
        b: [1.0, 1.0, 0.0],
    }
}

/// Every initial cell lies inside the hyperbolicity bounds.
pub fn initially_admissible(id: CaseId, n: usize) -> bool {
    let case = TestCase::get(id);
    let g = case.grid(n);
    (0..g.ny).all(|j| (0..g.nx).all(|i| admissibility(&case.primitive_at(g.x(i), g.y(j))).region != Region::Violated))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in CaseId::ALL {
            assert_eq!(id.name().parse::<CaseId>().unwrap(), id);
        }
        assert_eq!("rp1".parse::<CaseId>().unwrap(), CaseId::BrioWu);
        assert!("nope".parse::<CaseId>().is_err());
    }

    #[test]
    fn exact_solution_samples() {
        assert!((exact_accuracy_solution(0.25, 0.0).rho - 3.0).abs() < 1e-15);
        assert!((exact_accuracy_solution(0.25, 1.0).rho - 3.0).abs() < 1e-14);
        assert!((exact_accuracy_solution(0.0, 0.5).rho - 2.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_checked() {
        let g = TestCase::get(CaseId::BrioWu).grid(10);
        assert!(init_case(CaseId::OrszagTang, &g).is_err());
    }
}

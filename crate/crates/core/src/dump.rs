//! CSV renderings of bases and Wigner tables. Row order is fixed so that
//! output is byte-stable.

use std::io::{self, Write};

use crate::gf::Field;
use crate::mub::{all_bases, mub_basis, BasisId};
use crate::phasespace::{DiscreteWigner, PairWignerSupport, SUPPORT_TOL};

/// `basis,b_index,c_index,n_index,re,im` for every amplitude of every basis.
/// `b_index` is empty for the computational basis.
pub fn write_bases_csv<W: Write>(field: &Field, mut out: W) -> io::Result<()> {
    writeln!(out, "basis,b_index,c_index,n_index,re,im")?;
    for id in all_bases(field) {
        let (kind, b_index) = match &id {
            BasisId::Quadratic(b) => ("quadratic", b.index().to_string()),
            BasisId::Computational => ("computational", String::new()),
        };
        for (c, state) in mub_basis(field, &id).iter().enumerate() {
            for (n, a) in state.amps().iter().enumerate() {
                writeln!(out, "{kind},{b_index},{c},{n},{},{}", a.re, a.im)?;
            }
        }
    }
    out.flush()
}

fn snap(v: f64) -> f64 {
    if v.abs() <= SUPPORT_TOL {
        0.0
    } else {
        v
    }
}

/// `q,p,value` for the full d×d table; entries below the support
/// tolerance are written as 0.
pub fn write_wigner_csv<W: Write>(w: &DiscreteWigner, mut out: W) -> io::Result<()> {
    writeln!(out, "q,p,value")?;
    for q in 0..w.d() {
        for p in 0..w.d() {
            writeln!(out, "{q},{p},{}", snap(w.get(q, p)))?;
        }
    }
    out.flush()
}

/// `q1,p1,q2,p2,value` over the support only.
pub fn write_pair_support_csv<W: Write>(s: &PairWignerSupport, mut out: W) -> io::Result<()> {
    writeln!(out, "q1,p1,q2,p2,value")?;
    for (&(q1, p1, q2, p2), v) in &s.points {
        writeln!(out, "{q1},{p1},{q2},{p2},{v}")?;
    }
    out.flush()
}

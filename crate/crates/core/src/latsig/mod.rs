//! Signals on finite lattices: meet and join shifts, semilattice
//! convolution, the indicator eigenbases with their change of basis, and
//! convolution with values in a residuated lattice.

mod basis;
mod residuated;

use std::fmt;
use std::io::{Read, Write};
use std::ops::{Add, Mul};
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};

pub use basis::{eigenbasis, join_eigenvector, meet_eigenvector, theta_intertwines, BasisPair, MAX_BASIS_ELEMENTS};
pub use residuated::{residuated_convolve, residuated_convolve_adjoint};

/// Agreement tolerance for floating-point signals.
pub const TOLERANCE: f64 = 1e-9;

/// Which semilattice operation a shift or convolution uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShiftFlavor {
    Meet,
    Join,
}

impl fmt::Display for ShiftFlavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ShiftFlavor::Meet => "meet",
            ShiftFlavor::Join => "join",
        })
    }
}

impl FromStr for ShiftFlavor {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "meet" => Ok(ShiftFlavor::Meet),
            "join" => Ok(ShiftFlavor::Join),
            other => Err(format!("unknown shift flavor `{other}` (expected meet or join)")),
        }
    }
}

/// `σ(y) = y ∧ x` (meet) or `y ∨ x` (join), so that `(T_x f)_y = f[σ(y)]`.
pub fn shift_index(lattice: &FiniteLattice, x: Elem, flavor: ShiftFlavor) -> Result<Vec<Elem>> {
    check_element(lattice, x)?;
    Ok(lattice
        .elements()
        .map(|y| match flavor {
            ShiftFlavor::Meet => lattice.meet(y, x),
            ShiftFlavor::Join => lattice.join(y, x),
        })
        .collect())
}

fn check_element(lattice: &FiniteLattice, x: Elem) -> Result<()> {
    if x >= lattice.size() {
        return Err(Error::shape(format!("element {x} of a {}-element lattice", lattice.size())));
    }
    Ok(())
}

/// One value per lattice element, indexed by element.
#[derive(Clone, Debug)]
pub struct LatticeSignal<T = f64> {
    lattice: Arc<FiniteLattice>,
    values: Vec<T>,
}

impl<T: PartialEq> PartialEq for LatticeSignal<T> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice.same_shape(&other.lattice))
            && self.values == other.values
    }
}

impl<T: Clone> LatticeSignal<T> {
    pub fn new(lattice: Arc<FiniteLattice>, values: Vec<T>) -> Result<Self> {
        if values.len() != lattice.size() {
            return Err(Error::shape(format!(
                "{} values for a {}-element lattice",
                values.len(),
                lattice.size()
            )));
        }
        Ok(LatticeSignal { lattice, values })
    }

    pub fn from_fn(lattice: Arc<FiniteLattice>, f: impl Fn(Elem) -> T) -> Self {
        let values = lattice.elements().map(f).collect();
        LatticeSignal { lattice, values }
    }

    pub fn constant(lattice: Arc<FiniteLattice>, value: T) -> Self {
        let values = vec![value; lattice.size()];
        LatticeSignal { lattice, values }
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn get(&self, x: Elem) -> &T {
        &self.values[x]
    }

    /// `T_x^∧ f` or `T_x^∨ f`.
    pub fn shift(&self, x: Elem, flavor: ShiftFlavor) -> Result<Self> {
        let sigma = shift_index(&self.lattice, x, flavor)?;
        Ok(LatticeSignal {
            lattice: self.lattice.clone(),
            values: sigma.into_iter().map(|y| self.values[y].clone()).collect(),
        })
    }

    fn check_same_lattice(&self, other: &LatticeSignal<T>) -> Result<()> {
        if Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice.same_shape(&other.lattice) {
            Ok(())
        } else {
            Err(Error::shape("signals live on different lattices"))
        }
    }
}

impl<T: Clone + Zero + One> LatticeSignal<T> {
    /// Indicator of the single element `x`.
    pub fn one_hot(lattice: Arc<FiniteLattice>, x: Elem) -> Result<Self> {
        check_element(&lattice, x)?;
        Ok(Self::from_fn(lattice, |y| if y == x { T::one() } else { T::zero() }))
    }
}

impl<T: Clone + Zero + Mul<Output = T>> LatticeSignal<T> {
    /// `(h ⊛ f)_y = Σ_x h_x f[x ∧ y]` (meet) or `Σ_x h_x f[x ∨ y]` (join),
    /// with `self` as the filter `h`.
    pub fn convolve(&self, f: &LatticeSignal<T>, flavor: ShiftFlavor) -> Result<LatticeSignal<T>> {
        self.check_same_lattice(f)?;
        let l = &self.lattice;
        let values = l
            .elements()
            .map(|y| {
                l.elements().fold(T::zero(), |acc, x| {
                    let xy = match flavor {
                        ShiftFlavor::Meet => l.meet(x, y),
                        ShiftFlavor::Join => l.join(x, y),
                    };
                    acc + self.values[x].clone() * f.values[xy].clone()
                })
            })
            .collect();
        Ok(LatticeSignal {
            lattice: l.clone(),
            values,
        })
    }

    /// `a·f + b·g`.
    pub fn linear_combination(&self, a: T, g: &LatticeSignal<T>, b: T) -> Result<LatticeSignal<T>>
    where
        T: Add<Output = T>,
    {
        self.check_same_lattice(g)?;
        Ok(LatticeSignal {
            lattice: self.lattice.clone(),
            values: self
                .values
                .iter()
                .zip(&g.values)
                .map(|(f, g)| a.clone() * f.clone() + b.clone() * g.clone())
                .collect(),
        })
    }
}

impl LatticeSignal<f64> {
    pub fn approx_eq(&self, other: &LatticeSignal<f64>) -> bool {
        self.check_same_lattice(other).is_ok()
            && self.values.iter().zip(&other.values).all(|(a, b)| (a - b).abs() <= TOLERANCE)
    }
}

/// Writes `element_label,value` rows under that header, in element order.
pub fn write_signal_csv<W: Write>(out: W, signal: &LatticeSignal<f64>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.into());
    w.write_record(["element_label", "value"]).map_err(io)?;
    for x in signal.lattice.elements() {
        w.write_record([signal.lattice.label(x), signal.values[x].to_string()]).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a signal written by [`write_signal_csv`]. Rows may come in any
/// order but every element must appear exactly once.
pub fn read_signal_csv<R: Read>(lattice: Arc<FiniteLattice>, input: R) -> Result<LatticeSignal<f64>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let parse_err = |line: u64, column: usize, message: String| Error::Parse {
        line: line as usize,
        column,
        message,
    };
    let headers = reader
        .headers()
        .map_err(|e| parse_err(1, 1, e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != ["element_label", "value"] {
        return Err(parse_err(1, 1, "expected header `element_label,value`".into()));
    }
    let mut values: Vec<Option<f64>> = vec![None; lattice.size()];
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, 1, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(parse_err(line, 1, format!("expected 2 fields, found {}", record.len())));
        }
        let x = lattice
            .find_label(&record[0])
            .ok_or_else(|| parse_err(line, 1, format!("unknown element `{}`", &record[0])))?;
        let v: f64 = record[1]
            .trim()
            .parse()
            .map_err(|_| parse_err(line, 2, format!("invalid value `{}`", &record[1])))?;
        if values[x].replace(v).is_some() {
            return Err(parse_err(line, 1, format!("element `{}` listed twice", &record[0])));
        }
    }
    let missing: Vec<String> = lattice
        .elements()
        .filter(|&x| values[x].is_none())
        .map(|x| lattice.label(x))
        .collect();
    if !missing.is_empty() {
        return Err(Error::Spec(format!("signal has no value for {}", missing.join(", "))));
    }
    LatticeSignal::new(lattice, values.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::lattice::corpus::small_lattices;

    fn random_signal(l: &Arc<FiniteLattice>, rng: &mut ChaCha8Rng) -> LatticeSignal<f64> {
        LatticeSignal::new(l.clone(), l.elements().map(|_| rng.gen_range(-5.0..5.0)).collect()).unwrap()
    }

    #[test]
    fn top_meet_shift_is_identity() {
        let l = Arc::new(FiniteLattice::powerset(["a", "b"]).unwrap());
        let f = LatticeSignal::new(l.clone(), vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(f.shift(l.top(), ShiftFlavor::Meet).unwrap(), f);
        assert_eq!(f.shift(l.bot(), ShiftFlavor::Join).unwrap(), f);
        assert!(f.shift(9, ShiftFlavor::Meet).is_err());
    }

    #[test]
    fn join_after_meet_shift_is_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (name, l) in small_lattices() {
            let l = Arc::new(l);
            let f = random_signal(&l, &mut rng);
            for x in l.elements() {
                let g = f.shift(x, ShiftFlavor::Meet).unwrap().shift(x, ShiftFlavor::Join).unwrap();
                assert!(g.values().iter().all(|&v| v == f.values()[x]), "{name} x={x}");
            }
        }
    }

    #[test]
    fn convolution_with_one_hot_is_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for (_, l) in small_lattices() {
            let l = Arc::new(l);
            let f = random_signal(&l, &mut rng);
            let top = LatticeSignal::<f64>::one_hot(l.clone(), l.top()).unwrap();
            assert!(top.convolve(&f, ShiftFlavor::Meet).unwrap().approx_eq(&f));
            for x in l.elements() {
                let h = LatticeSignal::<f64>::one_hot(l.clone(), x).unwrap();
                for flavor in [ShiftFlavor::Meet, ShiftFlavor::Join] {
                    assert!(h.convolve(&f, flavor).unwrap().approx_eq(&f.shift(x, flavor).unwrap()));
                }
            }
        }
    }

    #[test]
    fn filters_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (name, l) in small_lattices() {
            let l = Arc::new(l);
            let (h, h2, f) = (random_signal(&l, &mut rng), random_signal(&l, &mut rng), random_signal(&l, &mut rng));
            for flavor in [ShiftFlavor::Meet, ShiftFlavor::Join] {
                let a = h.convolve(&h2.convolve(&f, flavor).unwrap(), flavor).unwrap();
                let b = h2.convolve(&h.convolve(&f, flavor).unwrap(), flavor).unwrap();
                assert!(a.approx_eq(&b), "{name} {flavor}");
            }
        }
    }

    #[test]
    fn csv_round_trip_with_comma_labels() {
        let l = Arc::new(FiniteLattice::powerset(["a", "b"]).unwrap());
        let f = LatticeSignal::new(l.clone(), vec![0.5, -1.0, 2.0, 3.25]).unwrap();
        let mut buf = Vec::new();
        write_signal_csv(&mut buf, &f).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("element_label,value\n"));
        assert!(text.contains("\"{a,b}\",3.25"));
        assert_eq!(read_signal_csv(l, text.as_bytes()).unwrap(), f);
    }

    #[test]
    fn csv_errors() {
        let l = Arc::new(FiniteLattice::chain(2).unwrap());
        let label0 = l.label(0);
        let bad_value = format!("element_label,value\n{label0},x\n");
        assert!(matches!(
            read_signal_csv(l.clone(), bad_value.as_bytes()),
            Err(Error::Parse { line: 2, column: 2, .. })
        ));
        let missing = format!("element_label,value\n{label0},1\n");
        assert!(matches!(read_signal_csv(l.clone(), missing.as_bytes()), Err(Error::Spec(_))));
        assert!(matches!(
            read_signal_csv(l, "label,value\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}

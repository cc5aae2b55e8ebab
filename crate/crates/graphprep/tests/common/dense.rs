//! Brute-force state-vector simulator used as an independent oracle for
//! the stabilizer tableau. Qubit q is bit q of the basis index.

use graphprep::stabsim::PauliOperator;

#[derive(Clone, Debug)]
pub struct DenseState {
    pub n: usize,
    // (re, im) amplitudes, 2^n entries
    pub amps: Vec<(f64, f64)>,
}

const EPS: f64 = 1e-9;

impl DenseState {
    pub fn zeros(n: usize) -> Self {
        let mut amps = vec![(0.0, 0.0); 1 << n];
        amps[0] = (1.0, 0.0);
        DenseState { n, amps }
    }

    pub fn plus(n: usize) -> Self {
        let dim = 1usize << n;
        let a = 1.0 / (dim as f64).sqrt();
        DenseState {
            n,
            amps: vec![(a, 0.0); dim],
        }
    }

    pub fn apply_h(&mut self, q: usize) {
        let bit = 1usize << q;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let a = self.amps[i];
                let b = self.amps[i | bit];
                self.amps[i] = (s * (a.0 + b.0), s * (a.1 + b.1));
                self.amps[i | bit] = (s * (a.0 - b.0), s * (a.1 - b.1));
            }
        }
    }

    pub fn apply_s(&mut self, q: usize) {
        let bit = 1usize << q;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *amp = (-amp.1, amp.0); // multiply by i
            }
        }
    }

    pub fn apply_x(&mut self, q: usize) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
    }

    pub fn apply_z(&mut self, q: usize) {
        let bit = 1usize << q;
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *amp = (-amp.0, -amp.1);
            }
        }
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) {
        let (ba, bb) = (1usize << a, 1usize << b);
        for (i, amp) in self.amps.iter_mut().enumerate() {
            if i & ba != 0 && i & bb != 0 {
                *amp = (-amp.0, -amp.1);
            }
        }
    }

    pub fn norm2(&self) -> f64 {
        self.amps.iter().map(|(r, i)| r * r + i * i).sum()
    }

    /// Projects onto the (-1)^minus eigenspace of a Hermitian Pauli and
    /// returns the outcome probability (state is renormalized when p > 0).
    pub fn project_pauli(&mut self, obs: &PauliOperator, minus: bool) -> f64 {
        let mut rotated = self.clone();
        rotated.apply_pauli_exact(obs);
        let sign = if minus { -1.0 } else { 1.0 };
        for (a, b) in self.amps.iter_mut().zip(rotated.amps) {
            a.0 = 0.5 * (a.0 + sign * b.0);
            a.1 = 0.5 * (a.1 + sign * b.1);
        }
        let p = self.norm2();
        if p > EPS {
            let s = 1.0 / p.sqrt();
            for a in &mut self.amps {
                a.0 *= s;
                a.1 *= s;
            }
        }
        p
    }

    /// Exact application of a signed Pauli product (Y included).
    pub fn apply_pauli_exact(&mut self, p: &PauliOperator) {
        assert_eq!(p.n(), self.n);
        let xs = p.x_mask();
        let zs = p.z_mask();
        let xmask: usize = xs.ones().iter().map(|&q| 1usize << q).sum();
        let mut out = vec![(0.0, 0.0); self.amps.len()];
        // decompose per qubit: I, X, Z act plainly; Y|b> = i(-1)^b |1-b>
        for (i, &(re, im)) in self.amps.iter().enumerate() {
            let j = i ^ xmask;
            let mut quarter = match p.sign() {
                1 => 0u32,
                _ => 2u32,
            };
            for q in 0..self.n {
                let (xb, zb) = (xs.get(q), zs.get(q));
                let bit = i & (1 << q) != 0;
                match (xb, zb) {
                    (false, false) => {}
                    (true, false) => {}
                    (false, true) => {
                        if bit {
                            quarter += 2;
                        }
                    }
                    (true, true) => {
                        // Y: i * (-1)^bit moving bit -> 1-bit
                        quarter += 1;
                        if bit {
                            quarter += 2;
                        }
                    }
                }
            }
            let (mut r2, mut i2) = (re, im);
            for _ in 0..(quarter % 4) {
                let t = (r2, i2);
                r2 = -t.1;
                i2 = t.0;
            }
            out[j].0 += r2;
            out[j].1 += i2;
        }
        self.amps = out;
    }

    /// True iff obs|psi> = |psi> within tolerance.
    pub fn is_stabilized_by(&self, obs: &PauliOperator) -> bool {
        let mut rotated = self.clone();
        rotated.apply_pauli_exact(obs);
        self.amps
            .iter()
            .zip(&rotated.amps)
            .all(|(a, b)| (a.0 - b.0).abs() < EPS && (a.1 - b.1).abs() < EPS)
    }
}

impl DenseState {
    pub fn graph_state(g: &graphprep::Graph) -> Self {
        let mut s = DenseState::plus(g.n());
        for (a, b) in g.edges() {
            s.apply_cz(a, b);
        }
        s
    }
}


//! Sampled checks of the operator identities of a unital Jordan algebra.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::algebra::{JordanAlgebra, JordanError};
use crate::linalg::Mat;
use crate::report::{Check, Tally};
use crate::scalar::Scalar;

/// Number of samples on which the determinant corollary of the fundamental
/// identity is also evaluated; the matrix identity itself runs on all of them.
const DET_SAMPLES: usize = 3;

fn scale<S: Scalar>(m: &Mat<S>) -> f64 {
    m.max_abs().max(1.0)
}

impl<S: Scalar> JordanAlgebra<S> {
    /// Self-adjointness of `T_v` and `P_v` for the trace form, the inverse
    /// laws `P_{v⁻¹} = P_v⁻¹`, `T_{v⁻¹} = T_v P_v⁻¹ = P_v⁻¹ T_v`, and the
    /// fundamental identity `P_{P_u v} = P_u P_v P_u`, on `samples` seeded
    /// random elements.
    pub fn operator_identities(&self, samples: usize, seed: u64) -> Result<Vec<Check>, JordanError> {
        let e = self.require_unity()?.clone();
        let n = self.dim();
        let g = self.gram();
        let id = Mat::<S>::identity(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut t_adj = Tally::new("t_self_adjoint", seed);
        let mut p_adj = Tally::new("p_self_adjoint", seed);
        let mut inv = Tally::new("inverse_laws", seed);
        let mut fund = Tally::new("fundamental_identity", seed);
        let mut fund_det = Tally::new("fundamental_identity_det", seed);
        let mut skipped = 0usize;
        for s in 0..samples {
            let u = self.random_element(&mut rng);
            let v = self.random_element(&mut rng);
            let tv = self.t_operator(&v);
            let pv = self.p_operator(&v);
            let pu = self.p_operator(&u);

            // ⟨T u, w⟩ = ⟨u, T w⟩  ⇔  G T is symmetric
            let gt = g.mul(&tv);
            t_adj.record(gt.sub(&gt.transpose()).data(), scale(&g) * scale(&tv));
            let gp = g.mul(&pv);
            p_adj.record(gp.sub(&gp.transpose()).data(), scale(&g) * scale(&pv));

            match self.invert(&v) {
                Ok(vi) => {
                    let pvi = self.p_operator(&vi);
                    let tvi = self.t_operator(&vi);
                    let sc = scale(&pvi) * scale(&pv);
                    inv.record(pvi.mul(&pv).sub(&id).data(), sc);
                    inv.record(tvi.mul(&pv).sub(&tv).data(), sc);
                    inv.record(pv.mul(&tvi).sub(&tv).data(), sc);
                    let ve: Vec<S> = self.product(&v, &vi).into_iter().zip(&e).map(|(a, b)| a - b).collect();
                    inv.record(&ve, sc);
                }
                Err(JordanError::NotInvertible { .. }) => skipped += 1,
                Err(_) => inv.fail(),
            }

            let puv = pu.mul_vec(&v);
            let lhs = self.p_operator(&puv);
            let rhs = pu.mul(&pv).mul(&pu);
            fund.record(lhs.sub(&rhs).data(), scale(&lhs).max(scale(&rhs)));
            if s < DET_SAMPLES {
                let dl = lhs.det();
                let du = pu.det();
                let dr = du.clone() * &du * &pv.det();
                fund_det.record_value(&(dl.clone() - &dr), dl.magnitude().max(dr.magnitude()));
                fund_det.count();
            }
        }
        // A sample of non-invertible elements is legitimate, a sample without
        // any invertible one is not.
        if skipped == samples && samples > 0 {
            inv.fail();
        }
        Ok(vec![t_adj.finish(), p_adj.finish(), inv.finish(), fund.finish(), fund_det.finish()])
    }
}

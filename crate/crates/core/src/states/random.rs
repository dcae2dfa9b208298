use rand::Rng;

use super::GaussianComponent;
use crate::scalar::Real;

/// Sampler for physical Gaussian components. A draw is a thermal state pushed
/// through passive mixing, single-mode squeezing, more passive mixing and a
/// displacement, so the result always satisfies the uncertainty principle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomGaussian {
    pub max_squeezing: f64,
    pub max_thermal: f64,
    pub max_displacement: f64,
}

impl Default for RandomGaussian {
    fn default() -> Self {
        Self {
            max_squeezing: 1.0,
            max_thermal: 0.5,
            max_displacement: 1.0,
        }
    }
}

impl RandomGaussian {
    pub fn pure() -> Self {
        Self {
            max_thermal: 0.0,
            ..Self::default()
        }
    }

    pub fn sample<T: Real, R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> GaussianComponent<T> {
        let nbar: Vec<T> = (0..n)
            .map(|_| T::lit(rng.gen::<f64>() * self.max_thermal))
            .collect();
        let mut st = GaussianComponent::thermal(&nbar);
        st = passive(st, rng);
        for m in 1..=n {
            let r = (rng.gen::<f64>() * 2.0 - 1.0) * self.max_squeezing;
            st = st.squeeze(m, T::lit(r)).expect("mode in range");
        }
        st = passive(st, rng);
        let d: Vec<T> = (0..2 * n)
            .map(|_| T::lit((rng.gen::<f64>() * 2.0 - 1.0) * self.max_displacement))
            .collect();
        st.displace(&d).expect("length 2n")
    }
}

fn passive<T: Real, R: Rng + ?Sized>(mut st: GaussianComponent<T>, rng: &mut R) -> GaussianComponent<T> {
    let n = st.n();
    let tau = std::f64::consts::TAU;
    for m in 1..=n {
        st = st.rotate(m, T::lit(rng.gen::<f64>() * tau)).expect("mode in range");
    }
    for i in 1..=n {
        for j in (i + 1)..=n {
            st = st
                .beamsplitter(i, j, T::lit(rng.gen::<f64>() * tau))
                .expect("distinct modes");
            st = st.rotate(j, T::lit(rng.gen::<f64>() * tau)).expect("mode in range");
        }
    }
    st
}

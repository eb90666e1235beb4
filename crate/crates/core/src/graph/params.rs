use crate::error::Error;
use crate::graph::WeightedGraph;
use crate::Result;

/// Derived parameter block for the refinement pipeline.
///
/// All members that enter capacity arithmetic are powers of two, so that
/// every grain value `M_i = w_prime_max / (2^i * gamma)` and every edge
/// capacity is an exact integer multiple of the scaling unit `M_z`. Working
/// in units of `M_z` keeps the whole pipeline in integer arithmetic even
/// though `M_z < 1`.
#[derive(Clone, Debug)]
pub struct ParamBlock {
    pub n: usize,
    /// Fixed accuracy exponent 1/45.
    pub eps_num: u32,
    pub eps_den: u32,
    /// Least power of two `>= n^{7/9}`.
    pub gamma: u64,
    pub gamma_log2: u32,
    /// Least power of two strictly greater than the maximum vertex weight.
    pub w_prime_max: u64,
    pub w_prime_max_log2: u32,
    /// Least power of two `>= 2n * w_prime_max`.
    pub w_max: u64,
    pub w_max_log2: u32,
    /// Phase count: least `z` with `2^z >= 8 * w_prime_max * n^2 / gamma`.
    pub z: u32,
    /// Oracle degree exponent, chosen so `n^delta = n^{4eps} / (4000 log n)`.
    pub delta: f64,
    /// Explored-out-copy cap `ceil(32 n^{1+2eps} log^2(w_max) / gamma)`.
    pub explore_cap: u64,
    /// Step-1 iteration budget `ceil(32 n / gamma)`.
    pub z_prime: u32,
    /// DFS-rule threshold `n / sqrt(gamma)`.
    pub tau_star: f64,
    /// `ceil(log2(tau_star))`, the largest counter-tracked parallel class.
    pub j_dfs_star: u32,
    /// log2 of the scaling unit `M_z = w_prime_max / (2^z * gamma)`; always
    /// `<= 0`, i.e. one unit is `2^{unit_log2}` in absolute weight scale.
    pub unit_log2: i32,
}

fn ceil_log2_u128(x: u128) -> u32 {
    assert!(x > 0);
    128 - (x - 1).leading_zeros()
}

impl ParamBlock {
    /// Derives the block from an instance with strictly positive weights.
    pub fn build(g: &WeightedGraph) -> Result<ParamBlock> {
        let n = g.n();
        if n < 2 {
            return Err(Error::invariant("parameter block needs n >= 2"));
        }
        let max_w = g.max_weight();
        if max_w == 0 {
            return Err(Error::invariant(
                "parameter block needs weights >= 1 (apply make_weights_positive first)",
            ));
        }

        // gamma: least power of two with gamma^9 >= n^7.
        let n7 = (n as u128).checked_pow(7).ok_or(Error::Overflow("gamma"))?;
        let mut gamma_log2 = 0u32;
        while gamma_log2 * 9 < 128 && (1u128 << (gamma_log2 * 9)) < n7 {
            gamma_log2 += 1;
        }
        let gamma = 1u64 << gamma_log2;

        // w_prime_max: least power of two strictly above max_w.
        let w_prime_max_log2 = ceil_log2_u128(max_w as u128 + 1);
        let w_prime_max = 1u64
            .checked_shl(w_prime_max_log2)
            .ok_or(Error::Overflow("w_prime_max"))?;

        // w_max: least power of two >= 2n * w_prime_max.
        let target = 2u128 * n as u128 * w_prime_max as u128;
        let w_max_log2 = ceil_log2_u128(target);
        if w_max_log2 >= 64 {
            return Err(Error::Overflow("w_max"));
        }
        let w_max = 1u64 << w_max_log2;

        // z: least z with 2^z * gamma >= 8 * w_prime_max * n^2.
        let goal = 8u128 * w_prime_max as u128 * (n as u128) * (n as u128);
        let mut z = 0u32;
        while (1u128 << z) * (gamma as u128) < goal {
            z += 1;
        }

        let nf = n as f64;
        let eps = 1.0 / 45.0;
        let log_n = nf.log2();
        let delta = 4.0 * eps - (4000.0 * log_n).log2() / log_n;
        let log_wmax = w_max_log2 as f64;
        let explore_cap = (32.0 * nf.powf(1.0 + 2.0 * eps) * log_wmax * log_wmax
            / gamma as f64)
            .ceil() as u64;
        let z_prime = (32 * n as u64).div_ceil(gamma).max(1) as u32;
        let tau_star = nf / (gamma as f64).sqrt();
        let mut j_dfs_star = 0u32;
        while (1u128 << (2 * j_dfs_star)) * (gamma as u128) < (n as u128) * (n as u128) {
            j_dfs_star += 1;
        }
        let unit_log2 = w_prime_max_log2 as i32 - z as i32 - gamma_log2 as i32;

        let params = ParamBlock {
            n,
            eps_num: 1,
            eps_den: 45,
            gamma,
            gamma_log2,
            w_prime_max,
            w_prime_max_log2,
            w_max,
            w_max_log2,
            z,
            delta,
            explore_cap,
            z_prime,
            tau_star,
            j_dfs_star,
            unit_log2,
        };
        debug_assert!(params.check().is_ok());
        Ok(params)
    }

    pub fn eps(&self) -> f64 {
        self.eps_num as f64 / self.eps_den as f64
    }

    /// Number of unit-scale bits: a weight `w` is `w << weight_shift` units.
    pub fn weight_shift(&self) -> u32 {
        (self.z + self.gamma_log2) - self.w_prime_max_log2
    }

    /// Converts an absolute integer weight to units of `M_z`.
    pub fn units_of_weight(&self, w: u64) -> u128 {
        (w as u128) << self.weight_shift()
    }

    /// Converts a unit value known to be integral back to absolute scale.
    pub fn weight_of_units(&self, units: u128) -> u128 {
        debug_assert!(units.trailing_zeros() >= self.weight_shift() || units == 0);
        units >> self.weight_shift()
    }

    pub fn w_max_units(&self) -> u128 {
        self.units_of_weight(self.w_max)
    }

    pub fn w_prime_max_units(&self) -> u128 {
        self.units_of_weight(self.w_prime_max)
    }

    /// Grain `M_i` in units: `2^{z-i}`.
    pub fn grain_units(&self, i: u32) -> u128 {
        debug_assert!(i <= self.z);
        1u128 << (self.z - i)
    }

    /// log2 of the absolute value of one unit times `2^j`, used to convert
    /// absolute power-of-two thresholds into unit scale.
    pub fn units_of_pow2(&self, exp: i32) -> u128 {
        let shifted = exp - self.unit_log2;
        assert!(
            (0..128).contains(&shifted),
            "power 2^{exp} is below the unit scale"
        );
        1u128 << shifted
    }

    pub fn log2_w_max(&self) -> f64 {
        self.w_max_log2 as f64
    }

    pub fn log2_n(&self) -> f64 {
        (self.n as f64).log2()
    }

    /// Oracle degree threshold `n^{1-delta} / (1000 log n) = 4 n^{1-4eps}`.
    pub fn oracle_tau(&self) -> f64 {
        4.0 * (self.n as f64).powf(1.0 - 4.0 * self.eps())
    }

    fn check(&self) -> Result<()> {
        let nf = self.n as f64;
        let lo = nf.powf(7.0 / 9.0);
        if (self.gamma as f64) < lo || self.gamma as f64 > 2.0 * lo {
            return Err(Error::invariant("gamma out of range"));
        }
        // M_z <= 1/(8 n^2)  <=>  2^z * gamma >= 8 w' n^2.
        if (1u128 << self.z) * (self.gamma as u128)
            < 8 * (self.w_prime_max as u128) * (self.n as u128).pow(2)
        {
            return Err(Error::invariant("phase count too small"));
        }
        if (self.w_max as u128) > 8 * self.n as u128 * self.w_prime_max as u128 {
            return Err(Error::invariant("w_max out of range"));
        }
        Ok(())
    }
}

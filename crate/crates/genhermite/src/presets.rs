//! Named configurations: the worked kernels the experiments and the
//! acceptance suite drive. Each preset fixes the kernel (or explicit
//! coefficient table), the truncation radii for ACF and scaling work, the
//! dyadic N grid, and — for filtered presets — the filter.

use crate::chaos::{ChaosConfig, CoeffSource, NoiseSpec};
use crate::fracfilter::{build_filter, FilterFamily, FilterSpec};
use crate::kernels::KernelSpec;
use crate::Result;

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub source: CoeffSource,
    /// Truncation radius for dense-grid work (ACF tables, simulation).
    pub m_default: usize,
    /// Truncation radius for exact variance-scaling sums.
    pub m_scaling: usize,
    /// Dyadic N grid for scaling fits, as exponents of 2.
    pub n_grid_log2: (u32, u32),
    pub filter: Option<(f64, FilterFamily, usize)>,
}

impl Preset {
    pub fn kernel(&self) -> Option<&KernelSpec> {
        self.source.kernel()
    }

    pub fn chaos_config(&self, noise: NoiseSpec) -> ChaosConfig {
        self.chaos_config_with_m(self.m_default, noise)
    }

    pub fn chaos_config_with_m(&self, m: usize, noise: NoiseSpec) -> ChaosConfig {
        match &self.source {
            CoeffSource::Kernel(spec) => ChaosConfig::kernel(spec.clone(), m, noise),
            CoeffSource::Explicit { k, entries } => {
                ChaosConfig::explicit(*k, m, entries.clone(), noise)
            }
        }
    }

    pub fn scaling_config(&self, noise: NoiseSpec) -> ChaosConfig {
        self.chaos_config_with_m(self.m_scaling, noise)
    }

    pub fn n_grid(&self) -> Vec<usize> {
        (self.n_grid_log2.0..=self.n_grid_log2.1)
            .map(|e| 1usize << e)
            .collect()
    }

    pub fn build_filter(&self) -> Result<Option<FilterSpec>> {
        match self.filter {
            Some((beta, family, length)) => Ok(Some(build_filter(beta, family, length)?)),
            None => Ok(None),
        }
    }
}

pub fn all() -> Vec<Preset> {
    vec![
        Preset {
            name: "hermite-k1-d03",
            summary: "order-1 power kernel x^{-0.7} (d = 0.3, H = 0.8)",
            source: CoeffSource::Kernel(KernelSpec::product(vec![-0.7])),
            m_default: 100_000,
            m_scaling: 100_000,
            n_grid_log2: (8, 14),
            filter: None,
        },
        Preset {
            name: "nonsym-rosenblatt",
            summary: "order-2 non-symmetric kernel x1^{-3/4} x2^{-5/8} (H = 0.625)",
            source: CoeffSource::Kernel(KernelSpec::product(vec![-0.75, -0.625])),
            m_default: 1500,
            m_scaling: 8192,
            n_grid_log2: (8, 14),
            filter: None,
        },
        Preset {
            name: "maxcombo-k2",
            summary: "order-2 max-combination kernel, alpha = -1.2 (H = 0.8)",
            source: CoeffSource::Kernel(KernelSpec::max_combo(2, -1.2)),
            m_default: 256,
            m_scaling: 1024,
            n_grid_log2: (6, 10),
            filter: None,
        },
        Preset {
            name: "normpower-k2",
            summary: "order-2 norm-power kernel |x|^{-1.2} (H = 0.8)",
            source: CoeffSource::Kernel(KernelSpec::norm_power(2, -1.2)),
            m_default: 256,
            m_scaling: 1024,
            n_grid_log2: (6, 10),
            filter: None,
        },
        Preset {
            name: "srd-finite-k2",
            summary: "order-2 finite-support table on {(1,2),(2,1)}, sigma^2 = 1",
            source: CoeffSource::Explicit {
                k: 2,
                entries: vec![(vec![1, 2], 0.5), (vec![2, 1], 0.5)],
            },
            m_default: 4,
            m_scaling: 4,
            n_grid_log2: (6, 12),
            filter: None,
        },
        Preset {
            name: "srd-iid-k1",
            summary: "order-1 unit table on {1}: i.i.d. partial sums",
            source: CoeffSource::Explicit {
                k: 1,
                entries: vec![(vec![1], 1.0)],
            },
            m_default: 2,
            m_scaling: 2,
            n_grid_log2: (6, 12),
            filter: None,
        },
        Preset {
            name: "flrd-antipersistent",
            summary: "x^{-0.7} chaos under the zero-sum filter beta = -0.45 (H = 0.35)",
            source: CoeffSource::Kernel(KernelSpec::product(vec![-0.7])),
            m_default: 100_000,
            m_scaling: 800_000,
            n_grid_log2: (9, 14),
            filter: Some((-0.45, FilterFamily::TelescopingZeroSum, 1 << 18)),
        },
        Preset {
            name: "flrd-persistent",
            summary: "x^{-0.7} chaos under the pure-power filter beta = 0.15 (H = 0.95)",
            source: CoeffSource::Kernel(KernelSpec::product(vec![-0.7])),
            m_default: 100_000,
            m_scaling: 300_000,
            n_grid_log2: (6, 11),
            filter: Some((0.15, FilterFamily::PurePower, 1 << 17)),
        },
    ]
}

pub fn find(name: &str) -> Option<Preset> {
    all().into_iter().find(|p| p.name == name)
}

//! Ancilla-assisted process tomography (AAQPT) of the depolarizing channel.
//!
//! The channel acts on qubit A of a Bell pair; the two-qubit output is
//! reconstructed by local Pauli-basis state tomography and linear inversion,
//! the process matrix is read off in the Bell basis, and the depolarizing
//! parameter is fitted by maximizing the fidelity to diag(1 − p, p/3, p/3, p/3).
//!
//! Tomography uses the 9 local settings {X, Y, Z}², each with 4 outcomes
//! ordered (++, +−, −+, −−).

use nalgebra::DVector;
use num_complex::Complex64;

use crate::channel::{apply_channel_one_side, chi_theoretical_dc, depolarizing_probs, ChiMatrix};
use crate::error::{Error, Result};
use crate::measurement::{derive_seed, sample_counts, OutcomeDistribution, SamplingConfig, SamplingMode};
use crate::qcore::{
    bell_state, fidelity_with_sqrt, hermitize, pauli_on_first, psd_project, tensor_product, BellLabel,
    ComplexMatrix, DensityMatrix, Pauli,
};

const GRID_STEP: f64 = 1e-3;
const FIT_TOLERANCE: f64 = 1e-7;

/// Single-qubit measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LocalBasis {
    X,
    Y,
    Z,
}

impl LocalBasis {
    pub const ALL: [LocalBasis; 3] = [LocalBasis::X, LocalBasis::Y, LocalBasis::Z];

    pub fn pauli(self) -> Pauli {
        match self {
            LocalBasis::X => Pauli::X,
            LocalBasis::Y => Pauli::Y,
            LocalBasis::Z => Pauli::Z,
        }
    }

    /// (I ± σ)/2
    fn projector(self, plus: bool) -> ComplexMatrix {
        let sign = if plus { 1.0 } else { -1.0 };
        (ComplexMatrix::identity(2, 2) + self.pauli().matrix() * Complex64::new(sign, 0.0))
            * Complex64::new(0.5, 0.0)
    }
}

/// Sign pattern (qubit A, qubit B) of each outcome within a setting.
const OUTCOME_SIGNS: [(bool, bool); 4] = [(true, true), (true, false), (false, true), (false, false)];

#[derive(Debug, Clone, PartialEq)]
pub struct TomographySettings {
    settings: Vec<(LocalBasis, LocalBasis)>,
}

impl TomographySettings {
    /// All nine pairs in row-major order (XX, XY, XZ, YX, ...).
    pub fn standard() -> Self {
        let settings = LocalBasis::ALL
            .iter()
            .flat_map(|&a| LocalBasis::ALL.iter().map(move |&b| (a, b)))
            .collect();
        TomographySettings { settings }
    }

    /// Any ordering of the nine distinct local basis pairs.
    pub fn new(settings: Vec<(LocalBasis, LocalBasis)>) -> Result<Self> {
        if settings.len() != 9 {
            return Err(Error::InvalidConfig(format!("need 9 settings, got {}", settings.len())));
        }
        for (i, s) in settings.iter().enumerate() {
            if settings[..i].contains(s) {
                return Err(Error::InvalidConfig(format!("duplicate setting {s:?}")));
            }
        }
        Ok(TomographySettings { settings })
    }

    pub fn settings(&self) -> &[(LocalBasis, LocalBasis)] {
        &self.settings
    }

    pub fn len(&self) -> usize {
        self.settings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.settings.is_empty()
    }

    /// Four projectors P_a ⊗ P_b of setting `index`, in outcome order.
    pub fn projectors(&self, index: usize) -> [ComplexMatrix; 4] {
        let (a, b) = self.settings[index];
        OUTCOME_SIGNS.map(|(sa, sb)| tensor_product(&a.projector(sa), &b.projector(sb)))
    }

    /// Per-setting budgets when `total` counts are spread uniformly. In
    /// multinomial mode the integer remainder goes to the first settings.
    pub fn split_budget(&self, total: f64, mode: SamplingMode) -> Vec<f64> {
        let n = self.settings.len();
        match mode {
            SamplingMode::Poisson => vec![total / n as f64; n],
            SamplingMode::Multinomial => {
                let total = total.round() as u64;
                let base = total / n as u64;
                let extra = (total % n as u64) as usize;
                (0..n).map(|i| (base + u64::from(i < extra)) as f64).collect()
            }
        }
    }
}

impl Default for TomographySettings {
    fn default() -> Self {
        Self::standard()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TomographyCounts {
    pub counts: Vec<[u64; 4]>,
    pub settings: TomographySettings,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AaqptResult {
    pub chi_exp: ChiMatrix,
    pub p_fit: f64,
    pub fidelity_at_fit: f64,
}

/// Born-rule probabilities Tr[ρ (P_a ⊗ P_b)] for every setting.
pub fn expected_probabilities(rho: &DensityMatrix, settings: &TomographySettings) -> Vec<[f64; 4]> {
    (0..settings.len())
        .map(|s| {
            let projectors = settings.projectors(s);
            let mut probs = [0.0; 4];
            for (p, proj) in probs.iter_mut().zip(projectors.iter()) {
                *p = (rho.matrix() * proj).trace().re.clamp(0.0, 1.0);
            }
            // absorb round-off so the row is an exact distribution
            let sum: f64 = probs.iter().sum();
            probs.iter_mut().for_each(|p| *p /= sum);
            probs
        })
        .collect()
}

/// Counts for every setting. `cfg.shots_or_mean` is the total budget over
/// all settings; setting `s` samples with a seed derived from `(cfg.seed, s)`.
pub fn simulate_qst_counts(
    rho: &DensityMatrix,
    settings: &TomographySettings,
    cfg: &SamplingConfig,
) -> Result<TomographyCounts> {
    if rho.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: "4x4".into(),
            actual: format!("{0}x{0}", rho.dim()),
        });
    }
    let budgets = settings.split_budget(cfg.shots_or_mean, cfg.mode);
    let counts = expected_probabilities(rho, settings)
        .into_iter()
        .enumerate()
        .map(|(s, probs)| {
            let dist = OutcomeDistribution::new(probs.to_vec())?;
            let setting_cfg = cfg.with_budget(budgets[s]).with_seed(derive_seed(cfg.seed, &[s as u64]));
            let c = sample_counts(&dist, &setting_cfg);
            let c = c.counts();
            Ok([c[0], c[1], c[2], c[3]])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TomographyCounts { counts, settings: settings.clone() })
}

/// ρ = ¼ Σ ⟨σ_i⊗σ_j⟩ σ_i⊗σ_j from per-setting outcome frequencies.
///
/// Correlators ⟨σ_a⊗σ_b⟩ come from setting (a, b) alone. Local terms
/// ⟨σ_a⊗I⟩ and ⟨I⊗σ_b⟩ are pooled over the three settings that measure the
/// corresponding basis, weighted by `weights` (the per-setting totals). The
/// result is Hermitian with unit trace but not necessarily positive.
pub fn linear_inversion_from_frequencies(
    freqs: &[[f64; 4]],
    weights: &[f64],
    settings: &TomographySettings,
) -> Result<ComplexMatrix> {
    if freqs.len() != settings.len() || weights.len() != settings.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} settings", settings.len()),
            actual: format!("{} frequency rows, {} weights", freqs.len(), weights.len()),
        });
    }
    let mut expectation = [[0.0f64; 4]; 4];
    let mut local_a = [(0.0f64, 0.0f64); 4];
    let mut local_b = [(0.0f64, 0.0f64); 4];
    for ((&(a, b), f), &w) in settings.settings().iter().zip(freqs).zip(weights) {
        let (ia, ib) = (a.pauli().index(), b.pauli().index());
        expectation[ia][ib] = f[0] - f[1] - f[2] + f[3];
        local_a[ia].0 += w * (f[0] + f[1] - f[2] - f[3]);
        local_a[ia].1 += w;
        local_b[ib].0 += w * (f[0] - f[1] + f[2] - f[3]);
        local_b[ib].1 += w;
    }
    expectation[0][0] = 1.0;
    let pooled = |(sum, total): (f64, f64), k: usize| {
        if total > 0.0 {
            Ok(sum / total)
        } else {
            Err(Error::EmptySample(format!("no data for local Pauli term {k}")))
        }
    };
    for k in 1..4 {
        expectation[k][0] = pooled(local_a[k], k)?;
        expectation[0][k] = pooled(local_b[k], k)?;
    }
    let mut rho = ComplexMatrix::zeros(4, 4);
    for (i, &pi) in Pauli::ALL.iter().enumerate() {
        for (j, &pj) in Pauli::ALL.iter().enumerate() {
            let term = tensor_product(&pi.matrix(), &pj.matrix());
            rho += term * Complex64::new(expectation[i][j] / 4.0, 0.0);
        }
    }
    Ok(hermitize(&rho))
}

/// Linear inversion from counts, projected onto the set of density matrices.
pub fn linear_inversion_state(counts: &TomographyCounts) -> Result<DensityMatrix> {
    let mut freqs = Vec::with_capacity(counts.counts.len());
    let mut weights = Vec::with_capacity(counts.counts.len());
    for (s, row) in counts.counts.iter().enumerate() {
        let total: u64 = row.iter().sum();
        if total == 0 {
            return Err(Error::EmptySample(format!("setting {s} recorded no counts")));
        }
        let t = total as f64;
        freqs.push(row.map(|c| c as f64 / t));
        weights.push(t);
    }
    let raw = linear_inversion_from_frequencies(&freqs, &weights, &counts.settings)?;
    psd_project(&raw)
}

/// χ_ij = ⟨B_i|ρ_out|B_j⟩ with B_i = (σ_i⊗I)|ψ−⟩.
pub fn chi_from_output(rho_out: &DensityMatrix) -> Result<ChiMatrix> {
    chi_from_output_with_input(rho_out, BellLabel::PsiMinus)
}

/// As [`chi_from_output`] for a channel probed with an arbitrary Bell state.
pub fn chi_from_output_with_input(rho_out: &DensityMatrix, input: BellLabel) -> Result<ChiMatrix> {
    if rho_out.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: "4x4".into(),
            actual: format!("{0}x{0}", rho_out.dim()),
        });
    }
    let tr = rho_out.matrix().trace();
    if (tr.re - 1.0).abs() > 1e-6 || tr.im.abs() > 1e-6 {
        return Err(Error::InvalidState(format!("output trace {tr} != 1")));
    }
    let reference = bell_state(input);
    let basis: Vec<DVector<Complex64>> = Pauli::ALL
        .iter()
        .map(|&p| pauli_on_first(p) * reference.amplitudes())
        .collect();
    let chi = ComplexMatrix::from_fn(4, 4, |i, j| basis[i].dotc(&(rho_out.matrix() * &basis[j])));
    ChiMatrix::new(hermitize(&chi))
}

/// argmax over p ∈ [0, 1] of F(χ_exp, χ_theo(p)), with χ_exp first projected
/// onto positive unit-trace matrices. Coarse grid, then golden-section
/// refinement; ties go to the smaller p.
pub fn fit_p_fidelity(chi_exp: &ChiMatrix) -> Result<(f64, f64)> {
    let target = psd_project(chi_exp.matrix())?;
    let objective = |p: f64| -> f64 {
        let third = (p / 3.0).sqrt();
        let sqrt_theo = ComplexMatrix::from_diagonal(&DVector::from_vec(vec![
            Complex64::new((1.0 - p).max(0.0).sqrt(), 0.0),
            Complex64::new(third, 0.0),
            Complex64::new(third, 0.0),
            Complex64::new(third, 0.0),
        ]));
        fidelity_with_sqrt(&sqrt_theo, target.matrix())
    };

    let steps = (1.0 / GRID_STEP).round() as usize;
    let mut best = (0.0, objective(0.0));
    for k in 1..=steps {
        let p = k as f64 / steps as f64;
        let f = objective(p);
        if f > best.1 {
            best = (p, f);
        }
    }

    let lo = (best.0 - GRID_STEP).max(0.0);
    let hi = (best.0 + GRID_STEP).min(1.0);
    let refined = golden_section_max(&objective, lo, hi, FIT_TOLERANCE);
    let mut candidates = [lo, refined, best.0, hi].map(|p| (p, objective(p)));
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    let winner = candidates
        .iter()
        .fold(candidates[0], |acc, &c| if c.1 > acc.1 { c } else { acc });
    // the winner must also beat the grid
    Ok(if winner.1 >= best.1 { winner } else { best })
}

fn golden_section_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Full AAQPT chain for the depolarizing channel with parameter `p_true`,
/// probed with the singlet and sampled per `cfg`.
pub fn aaqpt_pipeline(p_true: f64, cfg: &SamplingConfig) -> Result<AaqptResult> {
    aaqpt_pipeline_with_input(p_true, BellLabel::PsiMinus, Some(cfg))
}

/// AAQPT in the infinite-statistics limit: exact outcome frequencies.
pub fn aaqpt_pipeline_exact(p_true: f64) -> Result<AaqptResult> {
    aaqpt_pipeline_with_input(p_true, BellLabel::PsiMinus, None)
}

/// AAQPT probed with any Bell state; `cfg = None` uses exact frequencies.
pub fn aaqpt_pipeline_with_input(
    p_true: f64,
    input: BellLabel,
    cfg: Option<&SamplingConfig>,
) -> Result<AaqptResult> {
    let probs = depolarizing_probs(p_true)?;
    let rho_out = apply_channel_one_side(&probs, &bell_state(input).density_matrix())?;
    let settings = TomographySettings::standard();
    let rho_hat = match cfg {
        Some(cfg) => linear_inversion_state(&simulate_qst_counts(&rho_out, &settings, cfg)?)?,
        None => {
            let freqs = expected_probabilities(&rho_out, &settings);
            let weights = vec![1.0; settings.len()];
            psd_project(&linear_inversion_from_frequencies(&freqs, &weights, &settings)?)?
        }
    };
    let chi_exp = chi_from_output_with_input(&rho_hat, input)?;
    let (p_fit, fidelity_at_fit) = fit_p_fidelity(&chi_exp)?;
    Ok(AaqptResult { chi_exp, p_fit, fidelity_at_fit })
}

/// Fidelity of χ_exp to the depolarizing family member `p`, as maximized by
/// [`fit_p_fidelity`].
pub fn chi_fidelity(chi_exp: &ChiMatrix, p: f64) -> Result<f64> {
    let a = psd_project(chi_exp.matrix())?;
    let b = DensityMatrix::new(chi_theoretical_dc(p)?.matrix().clone())?;
    crate::qcore::uhlmann_fidelity(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{chi_of_pauli, PauliProbabilities};
    use crate::qcore::trace_distance;

    fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn random_state(entries: &[f64]) -> DensityMatrix {
        let g = ComplexMatrix::from_fn(4, 4, |r, c| {
            let k = 2 * (4 * r + c);
            Complex64::new(entries[k], entries[k + 1])
        });
        let gg = &g * g.adjoint();
        let tr = gg.trace().re;
        DensityMatrix::new(hermitize(&(gg / Complex64::new(tr, 0.0)))).unwrap()
    }

    fn exact_inversion(rho: &DensityMatrix) -> ComplexMatrix {
        let settings = TomographySettings::standard();
        let freqs = expected_probabilities(rho, &settings);
        linear_inversion_from_frequencies(&freqs, &[1.0; 9], &settings).unwrap()
    }

    #[test]
    fn settings_are_complete() {
        let s = TomographySettings::standard();
        assert_eq!(s.len(), 9);
        for i in 0..9 {
            let sum = s.projectors(i).iter().fold(ComplexMatrix::zeros(4, 4), |acc, p| acc + p);
            assert!(max_abs_diff(&sum, &ComplexMatrix::identity(4, 4)) < 1e-15);
        }
        let mut dup = s.settings().to_vec();
        dup[1] = dup[0];
        assert!(TomographySettings::new(dup).is_err());
        assert!(TomographySettings::new(s.settings()[..8].to_vec()).is_err());
    }

    #[test]
    fn singlet_zz_probabilities() {
        let settings = TomographySettings::standard();
        let zz = settings
            .settings()
            .iter()
            .position(|&s| s == (LocalBasis::Z, LocalBasis::Z))
            .unwrap();
        let probs = expected_probabilities(&bell_state(BellLabel::PsiMinus).density_matrix(), &settings);
        // (+,−) is |01⟩, (−,+) is |10⟩
        let expected = [0.0, 0.5, 0.5, 0.0];
        for k in 0..4 {
            assert!((probs[zz][k] - expected[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn maximally_mixed_is_uniform() {
        let probs = expected_probabilities(&DensityMatrix::maximally_mixed(4), &TomographySettings::standard());
        for row in probs {
            for p in row {
                assert!((p - 0.25).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_budget_gives_zero_counts() {
        let settings = TomographySettings::standard();
        let rho = bell_state(BellLabel::PsiMinus).density_matrix();
        for cfg in [SamplingConfig::multinomial(0, 3), SamplingConfig::poisson(0.0, 3).unwrap()] {
            let counts = simulate_qst_counts(&rho, &settings, &cfg).unwrap();
            assert!(counts.counts.iter().all(|row| row == &[0; 4]));
            assert!(matches!(linear_inversion_state(&counts), Err(Error::EmptySample(_))));
        }
    }

    #[test]
    fn budget_split() {
        let s = TomographySettings::standard();
        let multi = s.split_budget(1600.0, SamplingMode::Multinomial);
        assert_eq!(multi.iter().sum::<f64>(), 1600.0);
        assert_eq!(multi[0], 178.0);
        assert_eq!(multi[8], 177.0);
        let pois = s.split_budget(1800.0, SamplingMode::Poisson);
        assert_eq!(pois, vec![200.0; 9]);
    }

    #[test]
    fn inversion_exact_on_known_states() {
        let singlet = bell_state(BellLabel::PsiMinus).density_matrix();
        assert!(max_abs_diff(&exact_inversion(&singlet), singlet.matrix()) < 1e-10);
        let mixed = DensityMatrix::maximally_mixed(4);
        assert!(max_abs_diff(&exact_inversion(&mixed), mixed.matrix()) < 1e-10);
    }

    #[test]
    fn inversion_statistical_reconstruction() {
        let rho = apply_channel_one_side(
            &PauliProbabilities::new([0.55, 0.2, 0.15, 0.1]).unwrap(),
            &bell_state(BellLabel::PsiMinus).density_matrix(),
        )
        .unwrap();
        let cfg = SamplingConfig::multinomial(900_000, 17);
        let counts = simulate_qst_counts(&rho, &TomographySettings::standard(), &cfg).unwrap();
        assert!(counts.counts.iter().all(|row| row.iter().sum::<u64>() == 100_000));
        let rho_hat = linear_inversion_state(&counts).unwrap();
        assert!(trace_distance(rho_hat.matrix(), rho.matrix()) < 0.02);
    }

    #[test]
    fn chi_examples() {
        let singlet = bell_state(BellLabel::PsiMinus).density_matrix();
        let chi = chi_from_output(&singlet).unwrap();
        assert!(max_abs_diff(chi.matrix(), chi_of_pauli(&PauliProbabilities::identity()).matrix()) < 1e-15);

        let out = apply_channel_one_side(&depolarizing_probs(0.6).unwrap(), &singlet).unwrap();
        let chi = chi_from_output(&out).unwrap();
        assert!(max_abs_diff(chi.matrix(), chi_theoretical_dc(0.6).unwrap().matrix()) < 1e-15);

        let d = PauliProbabilities::new([0.0, 3.0 / 8.0, 0.5, 1.0 / 8.0]).unwrap();
        let out = apply_channel_one_side(&d, &singlet).unwrap();
        let chi = chi_from_output(&out).unwrap();
        assert!(max_abs_diff(chi.matrix(), chi_of_pauli(&d).matrix()) < 1e-15);
    }

    #[test]
    fn chi_with_other_bell_inputs() {
        let probs = PauliProbabilities::new([0.3, 0.1, 0.2, 0.4]).unwrap();
        for input in BellLabel::ALL {
            let out = apply_channel_one_side(&probs, &bell_state(input).density_matrix()).unwrap();
            let chi = chi_from_output_with_input(&out, input).unwrap();
            assert!(max_abs_diff(chi.matrix(), chi_of_pauli(&probs).matrix()) < 1e-12, "{input}");
        }
    }

    #[test]
    fn fit_examples() {
        let (p, f) = fit_p_fidelity(&chi_theoretical_dc(0.6).unwrap()).unwrap();
        assert!((p - 0.6).abs() < 1e-6);
        assert!((f - 1.0).abs() < 1e-9);

        let (p, f) = fit_p_fidelity(&ChiMatrix::diagonal([1.0, 0.0, 0.0, 0.0]).unwrap()).unwrap();
        assert_eq!(p, 0.0);
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_against_dense_grid_oracle() {
        let w = [0.38, 0.22, 0.20, 0.20];
        // commuting closed form F(p) = (Σ √(w_i q_i(p)))², scanned on a 1e-7 grid
        let oracle_f = |p: f64| {
            let q = [1.0 - p, p / 3.0, p / 3.0, p / 3.0];
            let s: f64 = w.iter().zip(q).map(|(a, b)| (a * b).sqrt()).sum();
            s * s
        };
        let n = 10_000_000usize;
        let mut best = (0.0, oracle_f(0.0));
        for k in 1..=n {
            let p = k as f64 / n as f64;
            let f = oracle_f(p);
            if f > best.1 {
                best = (p, f);
            }
        }
        let (p_fit, f_fit) = fit_p_fidelity(&ChiMatrix::diagonal(w).unwrap()).unwrap();
        assert!((p_fit - best.0).abs() < 1e-4, "fit {p_fit} oracle {}", best.0);
        assert!((f_fit - best.1).abs() < 1e-9);
    }

    #[test]
    fn fit_recovers_family_members() {
        for k in 0..=100 {
            let p = k as f64 / 100.0;
            let (p_fit, _) = fit_p_fidelity(&chi_theoretical_dc(p).unwrap()).unwrap();
            assert!((p_fit - p).abs() < 1e-6, "p = {p}, fit = {p_fit}");
        }
    }

    #[test]
    fn chi_fidelity_matches_fit() {
        let chi = ChiMatrix::diagonal([0.5, 0.2, 0.15, 0.15]).unwrap();
        let (p, f) = fit_p_fidelity(&chi).unwrap();
        assert!((chi_fidelity(&chi, p).unwrap() - f).abs() < 1e-10);
    }

    #[test]
    fn pipeline_exact_and_deterministic() {
        let r = aaqpt_pipeline_exact(0.5).unwrap();
        assert!((r.p_fit - 0.5).abs() < 1e-4);
        assert_eq!(aaqpt_pipeline_exact(0.0).unwrap().p_fit, 0.0);

        let cfg = SamplingConfig::poisson(1600.0, 11).unwrap();
        let a = aaqpt_pipeline(0.5, &cfg).unwrap();
        let b = aaqpt_pipeline(0.5, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(aaqpt_pipeline(1.5, &cfg).is_err());
    }

    #[test]
    fn pipeline_input_independence_exact() {
        for input in BellLabel::ALL {
            let r = aaqpt_pipeline_with_input(0.3, input, None).unwrap();
            assert!((r.p_fit - 0.3).abs() < 1e-4, "{input}: {}", r.p_fit);
        }
    }

    proptest::proptest! {
        #[test]
        fn exact_inversion_reconstructs_any_state(x in proptest::collection::vec(-1.0f64..1.0, 32)) {
            let rho = random_state(&x);
            proptest::prop_assert!(max_abs_diff(&exact_inversion(&rho), rho.matrix()) < 1e-12);
        }
    }
}

#include "parmot/moduli.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace parmot {

namespace {

Rational rat_abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

long rat_ceil(const Rational& x) {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return q.get_si();
}

bool is_integer(const Rational& x) { return x.get_den() == 1; }

// first primes above a floor, one per flag
std::vector<long> primes_above(long floor_val, int count) {
    std::vector<long> out;
    long cand = std::max(floor_val, 1L) + 1;
    auto is_prime = [](long v) {
        if (v < 2) return false;
        for (long p = 2; p * p <= v; ++p)
            if (v % p == 0) return false;
        return true;
    };
    while ((int)out.size() < count) {
        if (is_prime(cand)) out.push_back(cand);
        ++cand;
    }
    return out;
}

}  // namespace

void DivisorSpec::validate() const {
    for (auto& p : points) {
        if (p.n < 1) throw std::invalid_argument("DivisorSpec: n_x must be >= 1");
        if (p.nprime < 0 || p.nprime > p.n)
            throw std::invalid_argument("DivisorSpec: need 0 <= n'_x <= n_x");
    }
}

int DivisorSpec::deg() const {
    int s = 0;
    for (auto& p : points) s += p.n;
    return s;
}

int DivisorSpec::deg_prime() const {
    int s = 0;
    for (auto& p : points) s += p.nprime;
    return s;
}

bool DivisorSpec::full_level() const {
    for (auto& p : points)
        if (p.nprime != p.n) return false;
    return true;
}

std::vector<int> DivisorSpec::support_prime() const {
    std::vector<int> out;
    for (int i = 0; i < (int)points.size(); ++i)
        if (points[i].nprime > 0) out.push_back(i);
    return out;
}

int DivisorSpec::delta() const { return deg() - (int)support_prime().size(); }

int DivisorSpec::delta_full() const { return deg() - (int)points.size(); }

const std::vector<Rational>& NormalForm::at(int x, int j) const {
    auto it = entries.find({x, j});
    if (it == entries.end()) {
        std::ostringstream os;
        os << "NormalForm: missing entry for point " << x << ", flag " << j;
        throw std::out_of_range(os.str());
    }
    return it->second;
}

Rational NormalForm::top(int x, int j) const {
    const auto& v = at(x, j);
    if (v.empty()) throw std::out_of_range("NormalForm: empty coefficient vector");
    return v.front();
}

Rational NormalForm::residue(const DivisorSpec& div, int x, int j) const {
    const auto& pt = div.points.at(x);
    if (pt.nprime != pt.n)
        throw std::domain_error("NormalForm: residue undefined unless n'_x = n_x");
    const auto& v = at(x, j);
    if ((int)v.size() != pt.n)
        throw std::domain_error("NormalForm: coefficient vector length != n'_x");
    return v.back();
}

void NormalForm::validate(const DivisorSpec& div) const {
    for (auto& [key, vec] : entries) {
        const auto& pt = div.points.at(key.first);
        if ((int)vec.size() != pt.nprime)
            throw std::invalid_argument(
                "NormalForm: coefficient vector length must equal n'_x");
    }
}

Rational Weights::at(int x, int j) const {
    auto it = sigma.find({x, j});
    if (it == sigma.end()) {
        std::ostringstream os;
        os << "Weights: missing sigma for point " << x << ", flag " << j;
        throw std::out_of_range(os.str());
    }
    return it->second;
}

void Weights::validate(const DivisorSpec& div) const {
    for (auto& [key, val] : sigma) {
        auto& pt = div.points.at(key.first);
        auto prev = sigma.find({key.first, key.second - 1});
        if (prev != sigma.end() && val < prev->second)
            throw std::invalid_argument("Weights: sigma_{x,j} must be weakly increasing");
        auto first = sigma.find({key.first, 1});
        if (first != sigma.end() && val > first->second + pt.nprime)
            throw std::invalid_argument("Weights: sigma_{x,j} <= sigma_{x,1} + n'_x violated");
    }
}

ClassPredicates class_predicates(const GammaExponent& gamma, const DivisorSpec& div,
                                 const NormalForm& zeta) {
    ClassPredicates out;
    const int npts = (int)div.points.size();
    // full
    for (int x = 0; x < npts; ++x) {
        bool full = true;
        for (auto& [key, m] : gamma.parts)
            if (key.first == x && m > 1) full = false;
        if (full) out.full_at.insert(x);
    }
    // non-resonant: pairwise top-coefficient differences nonzero
    for (int x = 0; x < npts; ++x) {
        if (div.points[x].nprime == 0) {
            out.nonresonant_at.insert(x);
            continue;
        }
        std::vector<int> flags;
        for (auto& [key, m] : gamma.parts)
            if (key.first == x && m > 0) flags.push_back(key.second);
        bool ok = true;
        for (size_t a = 0; a < flags.size() && ok; ++a)
            for (size_t b = a + 1; b < flags.size() && ok; ++b)
                if (zeta.top(x, flags[a]) == zeta.top(x, flags[b])) ok = false;
        if (ok) out.nonresonant_at.insert(x);
    }
    out.admissible = true;
    for (int x = 0; x < npts; ++x) {
        if (div.points[x].nprime >= 2) {
            if (!out.full_at.count(x) || !out.nonresonant_at.count(x)) out.admissible = false;
        }
    }
    return out;
}

Rational star_residues(const GammaExponent& gamma, const DivisorSpec& div,
                       const NormalForm& zeta) {
    Rational s = 0;
    for (auto& [key, m] : gamma.parts) s += Rational(m) * zeta.residue(div, key.first, key.second);
    return s;
}

Rational star_weights(const GammaExponent& gamma, const Weights& sigma) {
    Rational s = 0;
    for (auto& [key, m] : gamma.parts) s += Rational(m) * sigma.at(key.first, key.second);
    return s;
}

long chi_of(const GammaExponent& gamma, const DivisorSpec& div, int g, ChiMode mode) {
    const long r = gamma.rank();
    // sum over points of n * sum_{i<j} r_{x,i} r_{x,j}
    auto cross = [&](bool use_nprime) {
        long s = 0;
        for (int x = 0; x < (int)div.points.size(); ++x) {
            long nx = use_nprime ? div.points[x].nprime : div.points[x].n;
            if (nx == 0) continue;
            std::vector<std::pair<int, int>> flags;  // (j, mult)
            for (auto& [key, m] : gamma.parts)
                if (key.first == x) flags.emplace_back(key.second, m);
            long c = 0;
            for (size_t a = 0; a < flags.size(); ++a)
                for (size_t b = a + 1; b < flags.size(); ++b)
                    c += (long)flags[a].second * flags[b].second;
            s += nx * c;
        }
        return s;
    };
    if (mode == ChiMode::Full) {
        long delta = div.delta_full();
        return (2 * g - 2) * r * r - delta * r + 2 * cross(false);
    }
    long lin = 0;
    for (auto& p : div.points)
        if (p.nprime > 0) lin += 1 - p.nprime;
    return (2 * g - 2 + div.deg() - div.deg_prime()) * r * r + r * lin + 2 * cross(true);
}

long euler_pairing(const GammaExponent& g1, long d1, const GammaExponent& g2, long d2,
                   const DivisorSpec& div, int g) {
    long r1 = g1.rank(), r2 = g2.rank();
    long s = (1 - (long)g) * r1 * r2 + r1 * d2 - r2 * d1;
    for (int x = 0; x < (int)div.points.size(); ++x) {
        long np = div.points[x].nprime;
        if (np == 0) continue;
        for (auto& [k1, m1] : g1.parts) {
            if (k1.first != x) continue;
            for (auto& [k2, m2] : g2.parts) {
                if (k2.first != x) continue;
                if (k1.second < k2.second) s -= np * (long)m1 * m2;
            }
        }
    }
    return s;
}

long stabilization_bound(const StackQuery& q) {
    const long r = q.gamma.rank();
    if (r == 0) return 0;
    long l = std::max(2L * q.g - 2 + q.divisor.deg(), 0L);
    const long margin = 1;
    if (q.eps != 0) {
        // |zeta|_gamma = sum_x max_{i: r_{x,i} != 0} |res zeta_{x,i}|
        Rational znorm = 0;
        for (int x = 0; x < (int)q.divisor.points.size(); ++x) {
            Rational best = 0;
            bool any = false;
            for (auto& [key, m] : q.gamma.parts) {
                if (key.first != x || m == 0) continue;
                Rational v = rat_abs(q.zeta.residue(q.divisor, x, key.second));
                if (!any || v > best) best = v;
                any = true;
            }
            if (any) znorm += best;
        }
        Rational bound = znorm / rat_abs(q.eps) + Rational((r - 1) * l, 2);
        return rat_ceil(bound) + margin;
    }
    // sigma-based bound: N with d - N r below the nonpositive threshold
    Rational snorm = 0;
    if (q.sigma) {
        for (int x = 0; x < (int)q.divisor.points.size(); ++x) {
            Rational best = 0;
            bool any = false;
            for (auto& [key, val] : q.sigma->sigma) {
                if (key.first != x) continue;
                Rational v = rat_abs(val);
                if (!any || v > best) best = v;
                any = true;
            }
            if (any) snorm += best;
        }
    }
    long l2 = std::max(l, rat_ceil(2 * snorm));
    Rational bound = Rational(q.d, r) + 2 * snorm + Rational((r - 1) * l2, 2);
    return std::max(rat_ceil(bound) + margin, 0L);
}

namespace {

struct DriverSetup {
    GenFunParams params;
    std::vector<int> kernel_to_divisor;  // kernel point index -> divisor index
    GammaExponent gamma_kernel;          // gamma' re-indexed to kernel points
    ChiMode chi_mode;
    bool use_zeta_filter;
    bool use_sigma_filter;
    bool lefschetz_multiplier;
};

DriverSetup make_setup(const StackQuery& q) {
    q.divisor.validate();
    q.zeta.validate(q.divisor);
    if (q.sigma) q.sigma->validate(q.divisor);

    DriverSetup s;
    s.chi_mode = ChiMode::Full;
    s.use_zeta_filter = true;
    s.use_sigma_filter = false;
    s.lefschetz_multiplier = true;

    std::vector<int> kernel_points;
    switch (q.kind) {
        case QueryKind::Full:
            if (q.eps == 0) throw std::invalid_argument("kind=full requires eps != 0");
            [[fallthrough]];
        case QueryKind::SemistableFull:
            if (!q.divisor.full_level())
                throw std::invalid_argument("full-level query requires D' = D");
            for (int i = 0; i < (int)q.divisor.points.size(); ++i) kernel_points.push_back(i);
            s.use_sigma_filter = (q.kind == QueryKind::SemistableFull);
            break;
        case QueryKind::SemistablePartial: {
            if (q.divisor.full_level())
                throw std::invalid_argument("semistable-partial requires D' < D");
            kernel_points = q.divisor.support_prime();
            s.chi_mode = ChiMode::Partial;
            s.use_zeta_filter = false;
            s.use_sigma_filter = true;
            s.lefschetz_multiplier = false;
            break;
        }
        case QueryKind::NonpositiveGraded: {
            if (q.divisor.full_level()) {
                for (int i = 0; i < (int)q.divisor.points.size(); ++i) kernel_points.push_back(i);
            } else {
                kernel_points = q.divisor.support_prime();
                s.chi_mode = ChiMode::Partial;
                s.use_zeta_filter = false;
                s.lefschetz_multiplier = false;
            }
            break;
        }
    }
    if (q.kind == QueryKind::SemistableFull || q.kind == QueryKind::SemistablePartial) {
        if (!q.sigma) throw std::invalid_argument("semistable query requires weights");
    }

    s.kernel_to_divisor = kernel_points;
    std::map<int, int> div_to_kernel;
    for (int k = 0; k < (int)kernel_points.size(); ++k) div_to_kernel[kernel_points[k]] = k;

    // re-index gamma' onto the kernel point list
    s.gamma_kernel.r = q.gamma.rank();
    int jmax = 1;
    for (auto& [key, m] : q.gamma.parts) {
        auto it = div_to_kernel.find(key.first);
        if (it == div_to_kernel.end())
            throw std::invalid_argument("query gamma touches a point outside the kernel support");
        s.gamma_kernel.parts[{it->second, key.second}] = m;
        jmax = std::max(jmax, key.second);
    }
    s.gamma_kernel.validate();

    s.params.g = q.g;
    for (int i : kernel_points) s.params.points.push_back(q.divisor.points[i].label);
    s.params.delta = q.kind == QueryKind::SemistablePartial ||
                             (q.kind == QueryKind::NonpositiveGraded && !q.divisor.full_level())
                         ? q.divisor.delta()
                         : q.divisor.delta_full();
    s.params.trunc = q.trunc;
    s.params.trunc.r_max = std::min(q.trunc.r_max, q.gamma.rank());
    if (s.params.trunc.r_max < q.gamma.rank())
        throw std::invalid_argument("truncation rank below the query rank");
    s.params.j_max = jmax;
    return s;
}

// translate a kernel-indexed gamma back to divisor indexing
GammaExponent to_divisor_indexing(const GammaExponent& g, const std::vector<int>& map) {
    GammaExponent out;
    out.r = g.r;
    for (auto& [key, m] : g.parts) out.parts[{map[key.first], key.second}] = m;
    return out;
}

ScalarFraction neg_base_pow(const RingCtx& ctx, const Monomial& base, long e) {
    const int n = ctx.nvars();
    Monomial m(n, 0);
    for (int i = 0; i < n; ++i) {
        long v = (long)base[i] * e;
        m[i] = (int)v;
    }
    Rational c = (e % 2 == 0) ? 1 : -1;
    return ScalarFraction(LaurentPoly::monomial(n, m, c));
}

struct KernelChoice {
    GradedSeries kernel;     // (1 - z^2) Log Omega at the chosen specialization
    Monomial lefschetz;      // image of q (multiplier inside Exp)
    Monomial prefactor_base; // image of qh ( (-base)^chi outside )
};

KernelChoice kernel_for(OmegaKind kind, const GenFunParams& p) {
    const RingCtx ctx = p.ring();
    const int n = ctx.nvars();
    Monomial q_img(n, 0), qh_img(n, 0);
    GradedSeries omega = GradedSeries::zero(p.trunc, n);
    switch (kind) {
        case OmegaKind::Univ:
            omega = build_omega(OmegaKind::Univ, p);
            q_img[ctx.qh()] = 2;
            qh_img[ctx.qh()] = 1;
            break;
        case OmegaKind::EPoly:
            omega = build_omega(OmegaKind::EPoly, p);
            q_img[ctx.uh()] = 2;
            q_img[ctx.vh()] = 2;
            qh_img[ctx.uh()] = 1;
            qh_img[ctx.vh()] = 1;
            break;
        case OmegaKind::PPoly:
            omega = build_omega(OmegaKind::PPoly, p);
            q_img[ctx.t()] = 2;
            qh_img[ctx.t()] = 1;
            break;
        default:
            throw std::invalid_argument("kernel_for: unsupported kind");
    }
    GradedSeries one_minus_z2 = GradedSeries::one(p.trunc, n);
    one_minus_z2.add_term(GammaExponent(), 2, ScalarFraction::constant(n, -1));
    return {one_minus_z2 * pleth_log(omega), q_img, qh_img};
}

}  // namespace

ScalarFraction theorem_driver(const StackQuery& q, OmegaKind omega_kind) {
    const RingCtx ctx(q.g);
    const int n = ctx.nvars();
    if (q.gamma.rank() == 0) return ScalarFraction::one(n);

    DriverSetup s = make_setup(q);
    auto preds = class_predicates(q.gamma, q.divisor, q.zeta);
    if (!preds.admissible)
        throw std::domain_error("query class outside Gamma_{D',zeta}");

    // degree constraint for full-level kinds: eps d + gamma * zeta = 0
    if (q.kind == QueryKind::Full || q.kind == QueryKind::SemistableFull) {
        Rational constraint = q.eps * Rational(q.d) + star_residues(q.gamma, q.divisor, q.zeta);
        if (constraint != 0) return ScalarFraction::zero(n);
    }

    KernelChoice kc = omega_kind == OmegaKind::Univ
                          ? KernelChoice{dt_kernels(s.params).h_univ, Monomial(n, 0), Monomial(n, 0)}
                          : kernel_for(omega_kind, s.params);
    if (omega_kind == OmegaKind::Univ) {
        Monomial q_img(n, 0), qh_img(n, 0);
        q_img[ctx.qh()] = 2;
        qh_img[ctx.qh()] = 1;
        kc.lefschetz = q_img;
        kc.prefactor_base = qh_img;
    }

    EvalZOneResult ev = eval_z_one(kc.kernel, q.tail_window);
    if (!ev.ok()) {
        std::ostringstream os;
        os << "polynomiality certificate failed at";
        for (auto& g : ev.failures) os << " " << g.to_string();
        throw std::runtime_error(os.str());
    }

    Rational tau = 0;
    if (s.use_sigma_filter)
        tau = (Rational(q.d) + star_weights(q.gamma, *q.sigma)) / Rational(q.gamma.rank());

    Trunc flat{s.params.trunc.r_max, 0};
    GradedSeries arg(flat, n);
    ScalarFraction mult =
        s.lefschetz_multiplier
            ? ScalarFraction(LaurentPoly::monomial(n, kc.lefschetz, 1))
            : ScalarFraction::one(n);
    for (auto& [gk, val] : ev.value) {
        if (gk.rank() == 0) continue;
        GammaExponent gd = to_divisor_indexing(gk, s.kernel_to_divisor);
        if (s.use_zeta_filter) {
            Rational sz = star_residues(gd, q.divisor, q.zeta);
            if (q.eps == 0) {
                if (sz != 0) continue;
            } else if (!is_integer(sz / q.eps)) {
                continue;
            }
        }
        if (s.use_sigma_filter) {
            Rational sv = star_weights(gd, *q.sigma) - tau * Rational(gd.rank());
            if (!is_integer(sv)) continue;
        }
        arg.add_term(gk, 0, val * mult);
    }

    ScalarFraction coeff = pleth_exp(arg).coefficient(s.gamma_kernel, 0);
    long chi = chi_of(q.gamma, q.divisor, q.g, s.chi_mode);
    return neg_base_pow(ctx, kc.prefactor_base, chi) * coeff;
}

ClassResult conn_class(const StackQuery& q) {
    ClassResult r;
    r.value = theorem_driver(q, OmegaKind::Univ);
    r.trunc_used = q.trunc;
    r.tail_window = q.tail_window;
    r.experimental_genus_zero = (q.g == 0);
    return r;
}

ScalarFraction graded_class(const StackQuery& q, long n_shift) {
    const RingCtx ctx(q.g);
    const int n = ctx.nvars();
    if (q.gamma.rank() == 0) return ScalarFraction::one(n);

    DriverSetup s = make_setup(q);
    auto preds = class_predicates(q.gamma, q.divisor, q.zeta);
    if (!preds.admissible)
        throw std::domain_error("query class outside Gamma_{D',zeta}");

    const long rk = q.gamma.rank();
    const long shift = (q.kind == QueryKind::NonpositiveGraded) ? 0 : n_shift;
    const long extract_z = -q.d + shift * rk;
    if (extract_z < 0 || extract_z > q.trunc.z_max)
        throw std::out_of_range("graded_class: z budget exceeded (need -d + N rk within z_max)");

    Monomial qh_img(n, 0);
    qh_img[ctx.qh()] = 1;

    if (q.kind == QueryKind::NonpositiveGraded && !q.divisor.full_level()) {
        // plain coefficient of (-qh)^chi Omega^Sch at w^gamma z^{-d}
        GradedSeries omega = build_omega(OmegaKind::Sch, s.params);
        long chi = chi_of(q.gamma, q.divisor, q.g, ChiMode::Partial);
        return neg_base_pow(ctx, qh_img, chi) * omega.coefficient(s.gamma_kernel, (int)extract_z);
    }

    Kernels k = dt_kernels(s.params);

    Rational tau = 0;
    if (s.use_sigma_filter)
        tau = (Rational(q.d) + star_weights(q.gamma, *q.sigma)) / Rational(rk);

    ScalarFraction mult = s.lefschetz_multiplier
                              ? ScalarFraction(LaurentPoly::gen_pow(n, ctx.qh(), 2))
                              : ScalarFraction::one(n);

    auto pred = [&](const GammaExponent& gk, int e) {
        if (gk.rank() == 0) return false;
        GammaExponent gd = to_divisor_indexing(gk, s.kernel_to_divisor);
        if (s.use_zeta_filter) {
            // -eps e + gamma * zeta = -eps N rk(gamma)
            Rational lhs = -q.eps * Rational(e) + star_residues(gd, q.divisor, q.zeta);
            if (lhs != -q.eps * Rational(shift) * Rational(gd.rank())) return false;
        }
        if (s.use_sigma_filter) {
            // -e + gamma * sigma = (tau - N) rk(gamma)
            Rational lhs = Rational(-e) + star_weights(gd, *q.sigma);
            if (lhs != (tau - Rational(shift)) * Rational(gd.rank())) return false;
        }
        return true;
    };

    GradedSeries arg = filter_terms(k.log_omega_sch, pred) * mult;
    ScalarFraction coeff = pleth_exp(arg).coefficient(s.gamma_kernel, (int)extract_z);
    long chi = chi_of(q.gamma, q.divisor, q.g, s.chi_mode);
    return neg_base_pow(ctx, qh_img, chi) * coeff;
}

ClassResult graded_class_stabilized(const StackQuery& q) {
    ClassResult out;
    out.trunc_used = q.trunc;
    out.tail_window = q.tail_window;
    out.experimental_genus_zero = (q.g == 0);
    long n0 = stabilization_bound(q);
    // need -d + N rk <= z_max
    const long rk = std::max(1, q.gamma.rank());
    ScalarFraction prev = graded_class(q, n0);
    for (long nn = n0 + 1;; ++nn) {
        if (-q.d + nn * rk > q.trunc.z_max)
            throw std::out_of_range("graded_class_stabilized: z budget exhausted before witness");
        ScalarFraction cur = graded_class(q, nn);
        if (cur == prev) {
            out.value = cur;
            out.witness_n = nn - 1;
            return out;
        }
        prev = cur;
    }
}

GradedSeries nilpotent_pair_class(int g, int delta, const Partition& mu,
                                  const std::vector<std::string>& points, Trunc trunc,
                                  int j_max) {
    GenFunParams p;
    p.g = g;
    p.points = points;
    p.delta = delta;
    p.trunc = trunc;
    p.j_max = j_max;
    if (mu.size() > trunc.r_max)
        throw std::invalid_argument("nilpotent_pair_class: |mu| exceeds r_max");
    GradedSeries term = build_omega_mu_term(OmegaKind::Sch, p, mu);
    const RingCtx ctx = p.ring();
    long sz = mu.size();
    long w = delta * sz * sz;
    ScalarFraction scale{LaurentPoly::gen_pow(ctx.nvars(), ctx.qh(), (int)-w)};
    if (w % 2) scale = -scale;
    return term * scale;
}

long ddp_dimension(const Partition& mu, int n, int g) {
    long sz = mu.size();
    long cross = 0;
    for (int i = 0; i < mu.length(); ++i)
        for (int j = i + 1; j < mu.length(); ++j)
            cross += (long)mu.parts()[i] * mu.parts()[j];
    return 2 * sz * sz * (g - 1) + 2 * (long)n * cross + 2;
}

DdpResult ddp_poincare(int g, int n, int r, Trunc trunc, int tail_window) {
    if (r < 1) throw std::invalid_argument("ddp_poincare: r must be >= 1");
    if (n < 1) throw std::invalid_argument("ddp_poincare: n must be >= 1");
    const RingCtx ctx(g);
    const int nv = ctx.nvars();

    StackQuery q;
    q.g = g;
    q.divisor.points = {{"p", n, n}};
    q.kind = QueryKind::SemistableFull;
    q.trunc = trunc;
    q.trunc.r_max = r;
    q.tail_window = tail_window;
    q.eps = 1;

    // gamma' = (r, 1^r); non-resonant zeta with integer residues j summing
    // into the degree constraint eps d' + gamma' * zeta = 0.
    q.gamma.r = r;
    long res_sum = 0;
    for (int j = 1; j <= r; ++j) {
        q.gamma.parts[{0, j}] = 1;
        std::vector<Rational> coeffs(n, Rational(0));
        coeffs[0] = j;            // deepest coefficient: distinct => non-resonant
        coeffs[n - 1] = j;        // residue
        if (n == 1) coeffs[0] = j;
        q.zeta.entries[{0, j}] = coeffs;
        res_sum += j;
    }
    q.d = -res_sum;

    DdpResult out;
    const Partition full_type(std::vector<int>(r, 1));
    out.d_val = ddp_dimension(full_type, n, g);

    // generic weights: sigma_j = 1 - 1/p_j with distinct primes p_j > r^2;
    // genericity fails iff some proper sub-slope collides with tau at an
    // integer degree, which the prime choice rules out. Checked anyway, with
    // regeneration.
    long prime_floor = (long)r * r;
    for (int attempt = 1; attempt <= 3; ++attempt, prime_floor *= 2) {
        out.witness_attempts = attempt;
        auto primes = primes_above(prime_floor, r);
        Weights w;
        for (int j = 1; j <= r; ++j) {
            Rational s = Rational(1) - Rational(1, primes[j - 1]);
            s.canonicalize();
            w.sigma[{0, j}] = s;
        }
        q.sigma = w;

        Rational tau = (Rational(q.d) + star_weights(q.gamma, w)) / Rational(r);
        bool generic = true;
        for (unsigned mask = 1; mask + 1 < (1u << r) && generic; ++mask) {
            int sz = 0;
            Rational ssum = 0;
            for (int j = 0; j < r; ++j)
                if (mask & (1u << j)) {
                    sz++;
                    ssum += w.sigma[{0, j + 1}];
                }
            // collision iff the solving degree d* = sz tau - ssum is an integer
            Rational dstar = Rational(sz) * tau - ssum;
            if (is_integer(dstar)) generic = false;
        }
        if (!generic) {
            if (attempt == 3)
                throw std::runtime_error("ddp_poincare: failed to draw generic weights");
            continue;
        }
        break;
    }

    ClassResult cls = conn_class(q);

    // Poincare specialization: qh^e -> t^e, alpha^e -> t^e
    std::map<int, ScalarFraction> subs;
    subs.emplace(ctx.qh(), ScalarFraction(LaurentPoly::gen_pow(nv, ctx.t(), 1)));
    for (int i = 0; i < g; ++i)
        subs.emplace(ctx.alpha(i), ScalarFraction(LaurentPoly::gen_pow(nv, ctx.t(), 1)));
    ScalarFraction pval = cls.value.substitute(subs);

    LaurentPoly t2m1 = LaurentPoly::gen_pow(nv, ctx.t(), 2) - LaurentPoly::constant(nv, 1);
    ScalarFraction h = (pval * ScalarFraction(t2m1)).deep_reduce();
    out.h = h;
    out.h_is_polynomial = h.is_polynomial();

    if (out.h_is_polynomial && !h.num().is_zero()) {
        std::map<int, ScalarFraction> inv;
        inv.emplace(ctx.t(), ScalarFraction(LaurentPoly::gen_pow(nv, ctx.t(), -1)));
        ScalarFraction h_inv = h.substitute(inv);
        // the identity as stated: t^{2 d} H(1/t) = H(t)
        out.palindromic =
            h_inv * ScalarFraction(LaurentPoly::gen_pow(nv, ctx.t(), (int)(2 * out.d_val))) == h;
        // diagnostic: reversal within the support of H
        int lo = h.num().min_exponents()[ctx.t()];
        int hi = lo;
        for (auto& [m, c] : h.num().terms()) hi = std::max(hi, m[ctx.t()]);
        out.palindromic_support =
            h_inv * ScalarFraction(LaurentPoly::gen_pow(nv, ctx.t(), lo + hi)) == h;
    }
    return out;
}

}  // namespace parmot

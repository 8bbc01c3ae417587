// SPDX-License-Identifier: Apache-2.0
#include "latdpc/lattice.hpp"

#include <cmath>
#include <limits>

#include "latdpc/errors.hpp"
#include "latdpc/kernels.hpp"
#include "latdpc/numerics.hpp"

namespace latdpc {

namespace {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Rank of gen over Z_p by Gaussian elimination.
int rank_mod_p(Eigen::MatrixXi gen, int p) {
    const int k = static_cast<int>(gen.rows());
    const int n = static_cast<int>(gen.cols());
    auto mod = [p](int v) { return ((v % p) + p) % p; };
    int rank = 0;
    for (int col = 0; col < n && rank < k; ++col) {
        int pivot = -1;
        for (int r = rank; r < k; ++r)
            if (mod(gen(r, col)) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) continue;
        gen.row(rank).swap(gen.row(pivot));
        // Normalize pivot to 1 via modular inverse (p prime).
        int inv = 1;
        const int a = mod(gen(rank, col));
        for (int x = 1; x < p; ++x)
            if (mod(a * x) == 1) {
                inv = x;
                break;
            }
        for (int c = 0; c < n; ++c) gen(rank, c) = mod(gen(rank, c) * inv);
        for (int r = 0; r < k; ++r) {
            if (r == rank) continue;
            const int factor = mod(gen(r, col));
            if (factor == 0) continue;
            for (int c = 0; c < n; ++c) gen(r, c) = mod(gen(r, c) - factor * gen(rank, c));
        }
        ++rank;
    }
    return rank;
}

}  // namespace

Lattice Lattice::scaled_integer(int n, double q) {
    if (n < 1) throw ConfigError("lattice: dimension must be positive");
    if (!(q > 0.0) || !std::isfinite(q)) throw ConfigError("lattice: scale q must be positive");
    Lattice lat;
    lat.kind_ = Kind::scaled_integer;
    lat.n_ = n;
    lat.q_ = q;
    return lat;
}

Lattice Lattice::construction_a(int n, int p, const Eigen::MatrixXi& gen, double scale) {
    if (n < 1) throw ConfigError("lattice: dimension must be positive");
    if (n > kMaxConstructionADim)
        throw ResourceError("lattice: construction-A dimension exceeds exact-search cap");
    if (!is_prime(p)) throw ConfigError("lattice: construction-A modulus must be prime");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw ConfigError("lattice: scale must be positive");
    const int k = static_cast<int>(gen.rows());
    if (k < 1 || k > n) throw ConfigError("lattice: generator must have 1 <= k <= n rows");
    if (gen.cols() != n) throw ConfigError("lattice: generator must have n columns");
    if (rank_mod_p(gen, p) != k) throw ConfigError("lattice: generator not full rank mod p");
    double n_cosets = std::pow(static_cast<double>(p), k);
    if (n_cosets > static_cast<double>(kMaxCosets))
        throw ResourceError("lattice: p^k exceeds the coset enumeration cap");
    Lattice lat;
    lat.kind_ = Kind::construction_a;
    lat.n_ = n;
    lat.p_ = p;
    lat.k_ = k;
    lat.scale_ = scale;
    lat.gen_ = gen;
    return lat;
}

double Lattice::log2_volume() const {
    if (kind_ == Kind::scaled_integer) return n_ * std::log2(q_);
    return n_ * std::log2(scale_) + (n_ - k_) * std::log2(static_cast<double>(p_));
}

double Lattice::volume() const { return std::exp2(log2_volume()); }

const std::vector<Eigen::VectorXd>& Lattice::cosets() const {
    if (kind_ != Kind::construction_a)
        throw ConfigError("lattice: coset enumeration applies to construction-A only");
    if (!cosets_) {
        std::int64_t count = 1;
        for (int i = 0; i < k_; ++i) count *= p_;
        auto list = std::make_shared<std::vector<Eigen::VectorXd>>();
        list->reserve(static_cast<std::size_t>(count));
        std::vector<int> u(static_cast<std::size_t>(k_), 0);
        for (std::int64_t idx = 0; idx < count; ++idx) {
            Eigen::VectorXd c(n_);
            for (int j = 0; j < n_; ++j) {
                long acc = 0;
                for (int i = 0; i < k_; ++i) acc += static_cast<long>(u[static_cast<std::size_t>(i)]) * gen_(i, j);
                c[j] = scale_ * static_cast<double>(((acc % p_) + p_) % p_);
            }
            list->push_back(std::move(c));
            // Odometer, last digit fastest: lexicographic u order.
            for (int i = k_ - 1; i >= 0; --i) {
                if (++u[static_cast<std::size_t>(i)] < p_) break;
                u[static_cast<std::size_t>(i)] = 0;
            }
        }
        cosets_ = std::move(list);
    }
    return *cosets_;
}

Eigen::VectorXd Lattice::quantize(const Eigen::VectorXd& s) const {
    if (s.size() != n_) throw ConfigError("lattice: dimension mismatch");
    Eigen::VectorXd out(n_);
    if (kind_ == Kind::scaled_integer) {
        kern::active().quantize_q(out.data(), s.data(), q_, static_cast<std::size_t>(n_));
        return out;
    }
    const double period = scale_ * p_;
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd candidate(n_);
    for (const auto& c : cosets()) {
        double dist = 0.0;
        for (int j = 0; j < n_; ++j) {
            const double w = c[j] + period * std::floor((s[j] - c[j]) / period + 0.5);
            candidate[j] = w;
            const double e = s[j] - w;
            dist += e * e;
        }
        if (dist < best) {
            best = dist;
            out = candidate;
        }
    }
    return out;
}

Eigen::VectorXd Lattice::fold(const Eigen::VectorXd& s) const {
    if (kind_ == Kind::scaled_integer) {
        Eigen::VectorXd out(s.size());
        kern::active().fold_q(out.data(), s.data(), q_, static_cast<std::size_t>(s.size()));
        return out;
    }
    return s - quantize(s);
}

void Lattice::fold_inplace(double* data, std::size_t len) const {
    if (kind_ == Kind::scaled_integer) {
        kern::active().fold_q(data, data, q_, len);
        return;
    }
    if (len % static_cast<std::size_t>(n_) != 0)
        throw ConfigError("lattice: buffer length not a multiple of the dimension");
    for (std::size_t off = 0; off < len; off += static_cast<std::size_t>(n_)) {
        Eigen::Map<Eigen::VectorXd> block(data + off, n_);
        block = fold(Eigen::VectorXd(block));
    }
}

double Lattice::second_moment() const {
    if (kind_ == Kind::scaled_integer) return q_ * q_ / 12.0;
    throw ConfigError("lattice: construction-A second moment requires the Monte Carlo variant");
}

double Lattice::second_moment_mc(std::int64_t n_samples, RandomStream& stream) const {
    if (n_samples < 1) throw ConfigError("lattice: second_moment_mc needs n_samples >= 1");
    CompensatedSum acc;
    for (std::int64_t i = 0; i < n_samples; ++i) {
        const Eigen::VectorXd d = sample_dither(stream);
        acc.add(kern::active().sum_sq(d.data(), static_cast<std::size_t>(n_)));
    }
    return acc.value() / static_cast<double>(n_samples) / static_cast<double>(n_);
}

double Lattice::normalized_second_moment(std::int64_t mc_samples, std::uint64_t seed) const {
    double sigma2;
    if (kind_ == Kind::scaled_integer) {
        sigma2 = second_moment();
    } else {
        if (mc_samples < 1)
            throw ConfigError("lattice: normalized_second_moment needs mc_samples for construction-A");
        RandomStream stream = RandomStream::derive(seed, stream_domain::lattice_mc, 0);
        sigma2 = second_moment_mc(mc_samples, stream);
    }
    return sigma2 / std::exp2(2.0 / n_ * log2_volume());
}

Eigen::VectorXd Lattice::sample_dither(RandomStream& stream) const {
    Eigen::VectorXd d(n_);
    if (kind_ == Kind::scaled_integer) {
        const double half = 0.5 * q_;
        for (int j = 0; j < n_; ++j) {
            // uniform01() - 0.5 is exact, so d lies in [-q/2, q/2) apart from
            // a one-ulp product corner, which the guard folds back.
            double v = q_ * (stream.uniform01() - 0.5);
            if (v >= half) v = -half;
            d[j] = v;
        }
        return d;
    }
    const double period = scale_ * p_;
    for (int j = 0; j < n_; ++j) d[j] = period * stream.uniform01();
    return fold(d);
}

NestedLatticeCode::NestedLatticeCode(Lattice coarse, Lattice fine, std::int64_t codebook_cap)
    : coarse_(std::move(coarse)), fine_(std::move(fine)), cap_(codebook_cap) {
    if (coarse_.dim() != fine_.dim()) throw ConfigError("nested code: dimension mismatch");
    const int n = coarse_.dim();

    // Nesting check: every coarse generator must be a fine-lattice point.
    std::vector<Eigen::VectorXd> generators;
    if (coarse_.kind() == Lattice::Kind::scaled_integer) {
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
            g[i] = coarse_.q();
            generators.push_back(std::move(g));
        }
    } else {
        for (const auto& c : coarse_.cosets()) generators.push_back(c);
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd g = Eigen::VectorXd::Zero(n);
            g[i] = coarse_.scale() * coarse_.modulus();
            generators.push_back(std::move(g));
        }
    }
    for (const auto& g : generators) {
        const Eigen::VectorXd r = fine_.fold(g);
        if (r.norm() > 1e-9 * std::max(1.0, g.norm()))
            throw ConfigError("nested code: coarse lattice is not nested in the fine lattice");
    }

    const double log2_ratio = coarse_.log2_volume() - fine_.log2_volume();
    if (log2_ratio < -1e-9) throw ConfigError("nested code: coarse cell smaller than fine cell");

    factorized_ = coarse_.kind() == Lattice::Kind::scaled_integer &&
                  fine_.kind() == Lattice::Kind::scaled_integer;
    if (factorized_) {
        const double r = coarse_.q() / fine_.q();
        ratio_ = std::llround(r);
        if (std::abs(r - static_cast<double>(ratio_)) > 1e-9 * r || ratio_ < 1)
            throw ConfigError("nested code: q_coarse / q_fine must be a positive integer");
    }
    // Codebook sizes beyond int64 are fine for factorized codes (nothing ever
    // enumerates them); flag with -1.
    if (log2_ratio > 62.0) {
        if (!factorized_) throw ResourceError("nested code: volume ratio too large to enumerate");
        codebook_size_ = -1;
    } else {
        const double ratio = std::exp2(log2_ratio);
        codebook_size_ = std::llround(ratio);
        if (std::abs(ratio - static_cast<double>(codebook_size_)) > 1e-6 * ratio || codebook_size_ < 1)
            throw ConfigError("nested code: volume ratio is not a positive integer");
    }
}

double NestedLatticeCode::rate_bits_per_dim() const {
    return (coarse_.log2_volume() - fine_.log2_volume()) / dim();
}

const std::vector<Eigen::VectorXd>& NestedLatticeCode::codebook() const {
    if (codebook_) return *codebook_;
    if (codebook_size_ < 0 || codebook_size_ > cap_)
        throw ResourceError("nested code: codebook size exceeds the cap");
    const int n = dim();
    auto book = std::make_shared<std::vector<Eigen::VectorXd>>();
    book->reserve(static_cast<std::size_t>(codebook_size_));

    // Per-coordinate candidate values of the fine lattice covering the
    // coarse cell, then exact membership through the coarse quantizer.
    std::vector<std::vector<double>> values(static_cast<std::size_t>(n));
    double bound;
    if (coarse_.kind() == Lattice::Kind::scaled_integer)
        bound = 0.5 * coarse_.q();
    else
        bound = 0.5 * coarse_.scale() * coarse_.modulus() * std::sqrt(static_cast<double>(n));

    double total_candidates = 1.0;
    if (factorized_) {
        // Index-grid enumeration, exactly the set random_codeword draws from
        // and nearest_codeword maps into.
        const double qf = fine_.q();
        const std::int64_t r = ratio_;
        const std::int64_t k_lo = -(r >> 1);
        std::vector<std::int64_t> idx(static_cast<std::size_t>(n), 0);
        Eigen::VectorXd t(n);
        for (;;) {
            for (int j = 0; j < n; ++j)
                t[j] = qf * static_cast<double>(k_lo + idx[static_cast<std::size_t>(j)]);
            book->push_back(t);
            int j = n - 1;
            for (; j >= 0; --j) {
                if (++idx[static_cast<std::size_t>(j)] < r) break;
                idx[static_cast<std::size_t>(j)] = 0;
            }
            if (j < 0) break;
        }
    } else if (fine_.kind() == Lattice::Kind::scaled_integer) {
        const double qf = fine_.q();
        const long lo = static_cast<long>(std::ceil(-bound / qf - 1e-12));
        const long hi = static_cast<long>(std::floor(bound / qf + 1e-12));
        for (int j = 0; j < n; ++j) {
            for (long v = lo; v <= hi; ++v) values[static_cast<std::size_t>(j)].push_back(qf * static_cast<double>(v));
            total_candidates *= static_cast<double>(hi - lo + 1);
        }
        if (total_candidates > static_cast<double>(cap_) * 64.0)
            throw ResourceError("nested code: enumeration box exceeds the cap");
        std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
        Eigen::VectorXd t(n);
        for (;;) {
            for (int j = 0; j < n; ++j) t[j] = values[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
            if (coarse_.quantize(t).isZero(0.0)) book->push_back(t);
            int j = n - 1;
            for (; j >= 0; --j) {
                if (++idx[static_cast<std::size_t>(j)] < values[static_cast<std::size_t>(j)].size()) break;
                idx[static_cast<std::size_t>(j)] = 0;
            }
            if (j < 0) break;
        }
    } else {
        // Construction-A fine lattice: coset representatives plus integer
        // shifts of scale*p covering the coarse cell.
        const double period = fine_.scale() * fine_.modulus();
        const long lo = static_cast<long>(std::ceil((-bound - fine_.scale() * (fine_.modulus() - 1)) / period - 1e-12));
        const long hi = static_cast<long>(std::floor(bound / period + 1e-12));
        const double shifts = static_cast<double>(hi - lo + 1);
        const double candidates = std::pow(shifts, n) * static_cast<double>(fine_.cosets().size());
        if (candidates > static_cast<double>(cap_) * 64.0)
            throw ResourceError("nested code: enumeration box exceeds the cap");
        Eigen::VectorXd t(n);
        for (const auto& c : fine_.cosets()) {
            std::vector<long> z(static_cast<std::size_t>(n), lo);
            for (;;) {
                for (int j = 0; j < n; ++j) t[j] = c[j] + period * static_cast<double>(z[static_cast<std::size_t>(j)]);
                if (coarse_.quantize(t).isZero(0.0)) book->push_back(t);
                int j = n - 1;
                for (; j >= 0; --j) {
                    if (++z[static_cast<std::size_t>(j)] <= hi) break;
                    z[static_cast<std::size_t>(j)] = lo;
                }
                if (j < 0) break;
            }
        }
    }

    if (static_cast<std::int64_t>(book->size()) != codebook_size_)
        throw NumericalError("nested code: enumerated codebook size disagrees with the volume ratio");
    codebook_ = std::move(book);
    return *codebook_;
}

Eigen::VectorXd NestedLatticeCode::random_codeword(RandomStream& stream) const {
    const int n = dim();
    if (factorized_) {
        const double qf = fine_.q();
        const std::int64_t r = ratio_;
        const long k_lo = -static_cast<long>(r / 2);
        Eigen::VectorXd t(n);
        for (int j = 0; j < n; ++j) {
            const long k = k_lo + static_cast<long>(stream.uniform_index(static_cast<std::uint64_t>(r)));
            t[j] = qf * static_cast<double>(k);
        }
        return t;
    }
    const auto& book = codebook();
    return book[static_cast<std::size_t>(stream.uniform_index(book.size()))];
}

Eigen::VectorXd NestedLatticeCode::nearest_codeword(const Eigen::VectorXd& y) const {
    const int n = dim();
    if (y.size() != n) throw ConfigError("nested code: dimension mismatch");
    if (factorized_) {
        // Decode on the fine-lattice index grid: after the nearest-index
        // rounding, the coarse modulo is exact integer arithmetic, so
        // codewords on the coarse cell boundary cannot be flipped by
        // round-off in q_f * j products.
        const double qf = fine_.q();
        const std::int64_t r = ratio_;
        const std::int64_t off = r >> 1;
        Eigen::VectorXd t(n);
        for (int i = 0; i < n; ++i) {
            const double jr = std::floor(y[i] / qf + 0.5);
            if (!(std::abs(jr) < 9.0e15))
                throw NumericalError("nested code: decoder input out of integer range");
            const std::int64_t j = static_cast<std::int64_t>(jr);
            const std::int64_t idx = ((j + off) % r + r) % r - off;
            t[i] = qf * static_cast<double>(idx);
        }
        return t;
    }
    const auto& book = codebook();
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < book.size(); ++i) {
        const Eigen::VectorXd r = coarse_.fold(y - book[i]);
        const double dist = kern::active().sum_sq(r.data(), static_cast<std::size_t>(n));
        if (dist < best) {
            best = dist;
            best_idx = i;
        }
    }
    return book[best_idx];
}

bool NestedLatticeCode::contains_codeword(const Eigen::VectorXd& t, double tol) const {
    if (t.size() != dim()) return false;
    if (factorized_) {
        // Index-space membership, consistent with the index-grid codebook.
        const double qf = fine_.q();
        const std::int64_t r = ratio_;
        const std::int64_t k_lo = -(r >> 1);
        for (int i = 0; i < dim(); ++i) {
            const double jr = std::floor(t[i] / qf + 0.5);
            if (!(std::abs(jr) < 9.0e15)) return false;
            const std::int64_t j = static_cast<std::int64_t>(jr);
            if (std::abs(t[i] - qf * static_cast<double>(j)) > tol * std::max(1.0, qf)) return false;
            if (j < k_lo || j >= k_lo + r) return false;
        }
        return true;
    }
    const Eigen::VectorXd fine_err = t - fine_.quantize(t);
    if (fine_err.norm() > tol) return false;
    const Eigen::VectorXd folded = coarse_.fold(t);
    return (folded - t).norm() <= tol;
}

double scaled_integer_q_for_power(double sigma2) {
    if (!(sigma2 > 0.0)) throw ConfigError("lattice: target power must be positive");
    return std::sqrt(12.0 * sigma2);
}

}  // namespace latdpc

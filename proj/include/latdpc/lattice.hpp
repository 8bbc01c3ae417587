// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "latdpc/rng.hpp"

namespace latdpc {

// A lattice in R^n, either q*Z^n (any dimension; per-coordinate arithmetic
// runs on the runtime-dispatched kernels) or a construction-A lattice
// scale*(C + p*Z^n) with C the row span of a k x n generator over Z_p
// (desk-scale: exact nearest-point search over coset representatives).
class Lattice {
  public:
    enum class Kind { scaled_integer, construction_a };

    static Lattice scaled_integer(int n, double q);
    static Lattice construction_a(int n, int p, const Eigen::MatrixXi& gen, double scale);

    Kind kind() const { return kind_; }
    int dim() const { return n_; }
    double q() const { return q_; }
    int modulus() const { return p_; }
    int message_dim() const { return k_; }
    double scale() const { return scale_; }

    double volume() const;
    double log2_volume() const;

    // Nearest lattice point; ties by the half-open cell rule per coordinate
    // (scaled_integer) or by coset enumeration order (construction_a).
    Eigen::VectorXd quantize(const Eigen::VectorXd& s) const;

    // s - quantize(s); for scaled_integer each coordinate lies in [-q/2, q/2).
    Eigen::VectorXd fold(const Eigen::VectorXd& s) const;

    // In-place fold of a raw buffer whose length is a multiple of dim()
    // (scaled_integer acts per coordinate on any length).
    void fold_inplace(double* data, std::size_t len) const;

    // Second moment per dimension. Closed form q^2/12 for scaled_integer;
    // construction_a requires the Monte Carlo variant.
    double second_moment() const;
    double second_moment_mc(std::int64_t n_samples, RandomStream& stream) const;

    // sigma^2 / Vol(V)^{2/n}; > 1/(2*pi*e) for every lattice.
    double normalized_second_moment(std::int64_t mc_samples = 0, std::uint64_t seed = 1) const;

    // Uniform draw over the fundamental Voronoi region.
    Eigen::VectorXd sample_dither(RandomStream& stream) const;

    // Construction-A coset representatives, scale*(u^T G mod p), in
    // lexicographic u order. Cached.
    const std::vector<Eigen::VectorXd>& cosets() const;

    static constexpr int kMaxConstructionADim = 12;
    static constexpr std::int64_t kMaxCosets = std::int64_t{1} << 20;

  private:
    Lattice() = default;

    Kind kind_ = Kind::scaled_integer;
    int n_ = 1;
    double q_ = 1.0;                  // scaled_integer
    int p_ = 0;                       // construction_a
    int k_ = 0;
    double scale_ = 1.0;
    Eigen::MatrixXi gen_;
    mutable std::shared_ptr<std::vector<Eigen::VectorXd>> cosets_;
};

// Nested pair: coarse (shaping) inside fine (coding). Verified at
// construction; the codebook is the set of fine points in the coarse
// fundamental cell.
class NestedLatticeCode {
  public:
    NestedLatticeCode(Lattice coarse, Lattice fine, std::int64_t codebook_cap = std::int64_t{1} << 20);

    const Lattice& coarse() const { return coarse_; }
    const Lattice& fine() const { return fine_; }
    int dim() const { return coarse_.dim(); }

    // (1/n) log2(Vol(V)/Vol(V1)) in bits per dimension.
    double rate_bits_per_dim() const;

    std::int64_t codebook_size() const { return codebook_size_; }

    // Enumerated codebook (lexicographic order); throws ResourceError above
    // the cap. Cached.
    const std::vector<Eigen::VectorXd>& codebook() const;

    // True when both lattices are scaled_integer, so quantization, decoding
    // and codeword drawing factorize per coordinate.
    bool factorizes() const { return factorized_; }

    Eigen::VectorXd random_codeword(RandomStream& stream) const;

    // Nearest fine-lattice point to y, folded into the coarse cell.
    Eigen::VectorXd nearest_codeword(const Eigen::VectorXd& y) const;

    bool contains_codeword(const Eigen::VectorXd& t, double tol = 1e-9) const;

  private:
    Lattice coarse_;
    Lattice fine_;
    std::int64_t cap_;
    std::int64_t codebook_size_ = 0;
    bool factorized_ = false;
    std::int64_t ratio_ = 0;  // q_coarse / q_fine when factorized
    mutable std::shared_ptr<std::vector<Eigen::VectorXd>> codebook_;
};

// Coarse lattice q chosen so the second moment q^2/12 equals sigma2.
double scaled_integer_q_for_power(double sigma2);

}  // namespace latdpc

#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>

#include "qwalk/tolerance.hpp"

namespace qwalk
{

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors
/// stored column-wise. Degenerate eigenvectors come in solver order.
template <typename Scalar>
struct Spectrum
{
	Vector<Scalar> eigenvalues;
	Matrix<Scalar> eigenvectors;
};

/// Entrywise bound for max|H - V diag(E) V^T| relative to max(1, max|H|),
/// and for max|V^T V - I|.
template <typename Scalar>
constexpr Scalar spectral_tolerance()
{
	return std::max<Scalar>(Scalar(1e-10), Scalar(1e4) * std::numeric_limits<Scalar>::epsilon());
}

/// Dense symmetric eigendecomposition. Throws NumericalError naming the
/// matrix when the solver fails or the result misses the reconstruction or
/// orthonormality bounds.
template <typename Scalar>
Spectrum<Scalar> eigendecompose(const Matrix<Scalar>& entries, const std::string& name = "operator")
{
	if(entries.rows() != entries.cols() || entries.rows() == 0)
	{
		throw std::invalid_argument(fmt::format("{}: eigendecompose needs a non-empty square matrix", name));
	}

	Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(entries, Eigen::ComputeEigenvectors);
	if(solver.info() != Eigen::Success)
	{
		throw NumericalError(fmt::format("{} ({}x{}): symmetric eigensolver did not converge",
		                                 name, entries.rows(), entries.cols()));
	}

	Spectrum<Scalar> result{solver.eigenvalues(), solver.eigenvectors()};

	const Scalar scale = std::max<Scalar>(Scalar(1), entries.cwiseAbs().maxCoeff());
	const Matrix<Scalar> rebuilt =
	    result.eigenvectors * result.eigenvalues.asDiagonal() * result.eigenvectors.transpose();
	const Scalar residual = (rebuilt - entries).cwiseAbs().maxCoeff();
	const Scalar orthogonality =
	    (result.eigenvectors.transpose() * result.eigenvectors - Matrix<Scalar>::Identity(entries.rows(), entries.cols()))
	        .cwiseAbs()
	        .maxCoeff();

	if(!(residual <= spectral_tolerance<Scalar>() * scale) || !(orthogonality <= spectral_tolerance<Scalar>()))
	{
		throw NumericalError(fmt::format("{} ({}x{}): spectral decomposition residual {:.3e}, orthogonality defect {:.3e}",
		                                 name, entries.rows(), entries.cols(),
		                                 static_cast<double>(residual), static_cast<double>(orthogonality)));
	}
	return result;
}

/// Real symmetric operator with a write-once spectral cache. Copies share
/// the cache, so a decomposition computed through any copy is visible to
/// all of them.
template <typename Scalar = double>
class HermitianOperator
{
public:
	using MatrixType = Matrix<Scalar>;

	explicit HermitianOperator(MatrixType entries, std::string name = "operator")
		: entries_{std::make_shared<const MatrixType>(std::move(entries))}
		, name_{std::move(name)}
		, cache_{std::make_shared<Cache>()}
	{
		const MatrixType& m = *entries_;
		if(m.rows() == 0 || m.rows() != m.cols())
		{
			throw std::invalid_argument(fmt::format("{}: operator must be a non-empty square matrix", name_));
		}
		for(Eigen::Index j = 0; j < m.cols(); ++j)
		{
			for(Eigen::Index i = j + 1; i < m.rows(); ++i)
			{
				if(m(i, j) != m(j, i))
				{
					throw std::invalid_argument(
					    fmt::format("{}: entries ({},{}) and ({},{}) differ", name_, i, j, j, i));
				}
			}
		}
	}

	[[nodiscard]] Eigen::Index dim() const { return entries_->rows(); }

	[[nodiscard]] const MatrixType& matrix() const { return *entries_; }

	[[nodiscard]] const std::string& name() const { return name_; }

	[[nodiscard]] bool has_spectrum() const { return cache_->value.has_value(); }

	/// Decomposes on first call; later calls return the cached result.
	[[nodiscard]] const Spectrum<Scalar>& spectrum() const
	{
		std::call_once(cache_->once, [this] {
			try
			{
				cache_->value = eigendecompose<Scalar>(*entries_, name_);
			}
			catch(...)
			{
				cache_->error = std::current_exception();
			}
		});
		if(cache_->error)
		{
			std::rethrow_exception(cache_->error);
		}
		return *cache_->value;
	}

private:
	struct Cache
	{
		std::once_flag once;
		std::optional<Spectrum<Scalar>> value;
		std::exception_ptr error;
	};

	std::shared_ptr<const MatrixType> entries_;
	std::string name_;
	std::shared_ptr<Cache> cache_;
};

/// Complex amplitude vector over a labeled basis.
template <typename Scalar = double>
class QuantumState
{
public:
	using Amplitudes = ComplexVector<Scalar>;

	QuantumState(Amplitudes amplitudes, std::vector<std::string> labels)
		: amplitudes_{std::move(amplitudes)}
		, labels_{std::move(labels)}
	{
		if(amplitudes_.size() == 0 || static_cast<std::size_t>(amplitudes_.size()) != labels_.size())
		{
			throw std::invalid_argument("state needs one label per amplitude");
		}
	}

	/// Labels the basis "0", "1", ... .
	explicit QuantumState(Amplitudes amplitudes)
		: QuantumState(amplitudes, index_labels(amplitudes.size()))
	{}

	[[nodiscard]] Eigen::Index dim() const { return amplitudes_.size(); }
	[[nodiscard]] const Amplitudes& amplitudes() const { return amplitudes_; }
	[[nodiscard]] const std::vector<std::string>& labels() const { return labels_; }
	[[nodiscard]] std::complex<Scalar> operator[](Eigen::Index i) const { return amplitudes_(i); }
	[[nodiscard]] Scalar norm() const { return amplitudes_.norm(); }

	static std::vector<std::string> index_labels(Eigen::Index n)
	{
		std::vector<std::string> out;
		out.reserve(static_cast<std::size_t>(n));
		for(Eigen::Index i = 0; i < n; ++i)
		{
			out.push_back(std::to_string(i));
		}
		return out;
	}

private:
	Amplitudes amplitudes_;
	std::vector<std::string> labels_;
};

/// Precomputes the eigenbasis expansion of an initial state so the state at
/// any time costs one dense matrix-vector product.
template <typename Scalar = double>
class Propagator
{
public:
	Propagator(HermitianOperator<Scalar> op, const QuantumState<Scalar>& initial)
		: op_{std::move(op)}
		, labels_{initial.labels()}
		, initial_norm_{initial.norm()}
	{
		if(op_.dim() != initial.dim())
		{
			throw std::invalid_argument(fmt::format("{}: dimension {} does not match state dimension {}",
			                                        op_.name(), op_.dim(), initial.dim()));
		}
		const auto& V = op_.spectrum().eigenvectors;
		coeff_re_ = V.transpose() * initial.amplitudes().real();
		coeff_im_ = V.transpose() * initial.amplitudes().imag();
	}

	[[nodiscard]] QuantumState<Scalar> at(Scalar t) const
	{
		const auto& spec = op_.spectrum();
		const Eigen::Index n = op_.dim();
		Vector<Scalar> re(n);
		Vector<Scalar> im(n);
		for(Eigen::Index k = 0; k < n; ++k)
		{
			// e^{-iEt} (x + iy)
			const Scalar phase = -spec.eigenvalues(k) * t;
			const Scalar c = std::cos(phase);
			const Scalar s = std::sin(phase);
			re(k) = c * coeff_re_(k) - s * coeff_im_(k);
			im(k) = s * coeff_re_(k) + c * coeff_im_(k);
		}
		ComplexVector<Scalar> out(n);
		out.real() = spec.eigenvectors * re;
		out.imag() = spec.eigenvectors * im;

		QuantumState<Scalar> state(std::move(out), labels_);
		if(std::abs(state.norm() - initial_norm_) > std::max<double>(tolerance(), spectral_tolerance<Scalar>()))
		{
			throw NumericalError(fmt::format("{}: norm drifted to {:.12f} at t = {}", op_.name(),
			                                 static_cast<double>(state.norm()), static_cast<double>(t)));
		}
		return state;
	}

	[[nodiscard]] const HermitianOperator<Scalar>& op() const { return op_; }

private:
	HermitianOperator<Scalar> op_;
	std::vector<std::string> labels_;
	Scalar initial_norm_;
	Vector<Scalar> coeff_re_;
	Vector<Scalar> coeff_im_;
};

/// Exact evolution e^{-iHt} psi0 through the spectral decomposition of H.
template <typename Scalar>
QuantumState<Scalar> evolve(const HermitianOperator<Scalar>& op, const QuantumState<Scalar>& psi0, Scalar t)
{
	return Propagator<Scalar>(op, psi0).at(t);
}

/// |amplitude|^2 in basis order.
template <typename Scalar>
Vector<Scalar> probabilities(const QuantumState<Scalar>& psi)
{
	return psi.amplitudes().cwiseAbs2();
}

template <typename Scalar>
std::map<std::string, Scalar> probability_map(const QuantumState<Scalar>& psi)
{
	std::map<std::string, Scalar> out;
	const Vector<Scalar> p = probabilities(psi);
	for(Eigen::Index i = 0; i < p.size(); ++i)
	{
		out[psi.labels()[static_cast<std::size_t>(i)]] += p(i);
	}
	return out;
}

using Operator = HermitianOperator<double>;
using State = QuantumState<double>;

} // namespace qwalk

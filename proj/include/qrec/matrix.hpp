#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qrec/errors.hpp"

namespace qrec {

using Complex = std::complex<double>;

/// Dense row-major complex matrix.  Workhorse of all quantum arithmetic:
/// states, unitaries, Kraus operators, and partial transposes all live here.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool empty() const { return data_.empty(); }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Complex* data() { return data_.data(); }
    const Complex* data() const { return data_.data(); }

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scalar);

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;

    Complex trace() const;
    /// Largest entry magnitude (the max "norm" used by tolerance checks).
    double max_abs() const;
    double frobenius_norm() const;
    /// max entry of |M - M^dagger|; zero for exactly Hermitian input.
    double hermiticity_error() const;

    bool operator==(const ComplexMatrix& other) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex scalar, ComplexMatrix m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

} // namespace qrec

// SPDX-License-Identifier: Apache-2.0

#include "bddc/matrix_market.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace bddc {

void write_matrix_market_symmetric(const std::string& path, const SparseSymMatrix& a) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  const auto& m = a.matrix();
  Index nnz_lower = 0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
      if (it.row() >= it.col()) ++nnz_lower;
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << m.rows() << " " << m.cols() << " " << nnz_lower << "\n";
  out << std::setprecision(17);
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
      if (it.row() >= it.col())
        out << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
}

void write_matrix_market(const std::string& path, const Eigen::SparseMatrix<double>& a) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << " " << a.cols() << " " << a.nonZeros() << "\n";
  out << std::setprecision(17);
  for (int k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it)
      out << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
}

Eigen::SparseMatrix<double> read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string header;
  std::getline(in, header);
  const bool symmetric = header.find("symmetric") != std::string::npos;
  while (in.peek() == '%') in.ignore(2048, '\n');
  Index rows, cols, nnz;
  in >> rows >> cols >> nnz;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(symmetric ? 2 * nnz : nnz);
  for (Index e = 0; e < nnz; ++e) {
    Index i, j;
    double v;
    in >> i >> j >> v;
    trip.emplace_back(i - 1, j - 1, v);
    if (symmetric && i != j) trip.emplace_back(j - 1, i - 1, v);
  }
  Eigen::SparseMatrix<double> m(rows, cols);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace bddc

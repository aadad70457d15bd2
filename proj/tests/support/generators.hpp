#pragma once

// Fixed-seed generators for property tests.

#include <cstdint>

#include "superconn/derivations.hpp"
#include "superconn/sampling.hpp"

namespace gen {

using namespace superconn;

inline constexpr std::uint64_t kSeed = 20240611;

inline Christoffel christoffel(Sampler& rng, int m, int max_degree = 1, int density = 40) {
  Christoffel G(m);
  for (int r = 0; r < m; ++r)
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q)
        if (rng.coin(density)) G(r, p, q) = rng.poly(m, max_degree, 2);
  return G;
}

inline VectorField vector_field(Sampler& rng, int m, int max_degree = 2) {
  VectorField X = VectorField::zero(m);
  for (auto& c : X.components)
    if (rng.coin(70)) c = rng.poly(m, max_degree, 2);
  return X;
}

/// Random generator action of degree n (values may be zero when out of range).
inline GeneratorAction action(Sampler& rng, int m, int n, int max_degree = 2) {
  GeneratorAction act;
  act.degree = n;
  for (int j = 0; j < m; ++j) {
    act.on_coordinates.push_back(rng.coin(70) ? rng.form(m, n, max_degree) : Form(m));
    act.on_differentials.push_back(rng.coin(70) ? rng.form(m, n + 1, max_degree) : Form(m));
  }
  return act;
}

inline DerivationSpec derivation(Sampler& rng, int m, int n, int max_degree = 2) {
  return from_generator_action(action(rng, m, n, max_degree));
}

inline VectorForm vector_form(Sampler& rng, int m, int degree, int max_degree = 2) {
  VectorForm K(m, degree);
  for (int j = 0; j < m; ++j)
    if (rng.coin(70)) K.set(j, rng.form(m, degree, max_degree));
  return K;
}

}  // namespace gen

namespace gen {

inline ESection section(Sampler& rng, SuperRank rank, int m, int max_degree = 2) {
  ESection s(rank, m);
  for (int i = 0; i < rank.size(); ++i)
    if (rng.coin(80)) s[i] = rng.mixed_form(m, max_degree);
  return s;
}

/// Random End-valued form; total_parity < 0 gives mixed entries.
inline EndForm end_form(Sampler& rng, SuperRank rank, int m, int total_parity = -1, int max_degree = 2,
                        int density = 60) {
  EndForm W(rank, m);
  for (int i = 0; i < rank.size(); ++i)
    for (int j = 0; j < rank.size(); ++j) {
      if (!rng.coin(density)) continue;
      if (total_parity < 0) {
        W(i, j) = rng.mixed_form(m, max_degree);
        continue;
      }
      for (int d = 0; d <= m; ++d)
        if (((d + rank.end_parity(i, j)) & 1) == total_parity && rng.coin(50))
          W(i, j) += rng.form(m, d, max_degree, 1);
    }
  return W;
}

/// Block-diagonal matrix of 1-forms.
inline EndForm connection_matrix(Sampler& rng, SuperRank rank, int m, int max_degree = 1, int density = 50) {
  EndForm W(rank, m);
  for (int i = 0; i < rank.size(); ++i)
    for (int j = 0; j < rank.size(); ++j)
      if (rank.end_parity(i, j) == 0 && rng.coin(density)) W(i, j) = rng.form(m, 1, max_degree);
  return W;
}

inline SuperRank rank(Sampler& rng) {
  static const SuperRank ranks[] = {{1, 0}, {1, 1}, {2, 1}, {1, 2}, {2, 2}, {0, 1}};
  return ranks[rng.uniform(0, 5)];
}

}  // namespace gen

#include "superconn/quillen.hpp"

namespace gen {

inline Superconnection superconnection(Sampler& rng, SuperRank rank, int m, int max_degree = 1) {
  return Superconnection(connection_matrix(rng, rank, m, max_degree), end_form(rng, rank, m, 1, max_degree, 50));
}

}  // namespace gen

#include "superconn/cartan.hpp"

namespace gen {

/// Random tensor value of fixed total parity with form degree <= max_form_degree.
inline EndForm tensor_value(Sampler& rng, SuperRank rank, int m, int total_parity, int max_form_degree,
                            int max_degree = 1, int density = 40) {
  EndForm W(rank, m);
  for (int i = 0; i < rank.size(); ++i)
    for (int j = 0; j < rank.size(); ++j)
      for (int d = 0; d <= std::min(m, max_form_degree); ++d)
        if (((d + rank.end_parity(i, j)) & 1) == total_parity && rng.coin(density))
          W(i, j) += rng.form(m, d, max_degree, 1);
  return W;
}

inline GradedConnection graded_connection(Sampler& rng, SuperRank rank, int m, bool torsion = true,
                                          int max_form_degree = 2) {
  const Christoffel G = torsion ? christoffel(rng, m, 1, 25) : Christoffel(m);
  std::vector<EndForm> K0, K1;
  for (int k = 0; k < m; ++k) {
    K0.push_back(tensor_value(rng, rank, m, 0, max_form_degree));
    K1.push_back(tensor_value(rng, rank, m, 1, max_form_degree));
  }
  return GradedConnection(G, connection_matrix(rng, rank, m), K0, K1);
}

}  // namespace gen

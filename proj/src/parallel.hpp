#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tori::detail {

// Static chunking over [0, n); each index must write only its own output slot.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, n / 256 + 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr err;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

// Solves J x = r in place (d <= 4) with partial pivoting; returns false if singular.
inline bool small_solve(double j[4][4], double r[4], int d) {
  for (int c = 0; c < d; ++c) {
    int piv = c;
    for (int i = c + 1; i < d; ++i)
      if (std::abs(j[i][c]) > std::abs(j[piv][c])) piv = i;
    if (std::abs(j[piv][c]) < 1e-300) return false;
    if (piv != c) {
      for (int k = 0; k < d; ++k) std::swap(j[c][k], j[piv][k]);
      std::swap(r[c], r[piv]);
    }
    for (int i = c + 1; i < d; ++i) {
      const double f = j[i][c] / j[c][c];
      for (int k = c; k < d; ++k) j[i][k] -= f * j[c][k];
      r[i] -= f * r[c];
    }
  }
  for (int c = d - 1; c >= 0; --c) {
    double acc = r[c];
    for (int k = c + 1; k < d; ++k) acc -= j[c][k] * r[k];
    r[c] = acc / j[c][c];
  }
  return true;
}

inline double small_det(double j[4][4], int d) {
  double det = 1.0;
  for (int c = 0; c < d; ++c) {
    int piv = c;
    for (int i = c + 1; i < d; ++i)
      if (std::abs(j[i][c]) > std::abs(j[piv][c])) piv = i;
    if (j[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      for (int k = 0; k < d; ++k) std::swap(j[c][k], j[piv][k]);
      det = -det;
    }
    det *= j[c][c];
    for (int i = c + 1; i < d; ++i) {
      const double f = j[i][c] / j[c][c];
      for (int k = c; k < d; ++k) j[i][k] -= f * j[c][k];
    }
  }
  return det;
}

}  // namespace tori::detail

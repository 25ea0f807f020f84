#include "volcone/sampling.hpp"

#include <algorithm>
#include <sstream>
#include <thread>
#include <vector>

#include "volcone/error.hpp"

namespace volcone {

bool Box::contains(const RationalVector& p) const {
  if (p.size() != lo.size()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  }
  return true;
}

std::vector<RationalVector> Box::corners() const {
  std::vector<RationalVector> out;
  const std::size_t n = dimension();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    RationalVector c(n);
    for (std::size_t i = 0; i < n; ++i) c[i] = (mask >> i) & 1U ? hi[i] : lo[i];
    out.push_back(std::move(c));
  }
  return out;
}

std::string Box::describe() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < dimension(); ++i) {
    if (i) out << " x ";
    out << '[' << to_string(lo[i]) << ", " << to_string(hi[i]) << ']';
  }
  return out.str();
}

Rational Sampler::unit() {
  const std::uint64_t top = std::uint64_t{1} << kBits;
  const std::uint64_t k = engine_() % (top + 1);
  Rational r(static_cast<unsigned long>(k), static_cast<unsigned long>(top));
  r.canonicalize();
  return r;
}

Rational Sampler::uniform(const Rational& lo, const Rational& hi) { return lo + (hi - lo) * unit(); }

RationalVector Sampler::point(const Box& box) {
  RationalVector p(box.dimension());
  for (std::size_t i = 0; i < box.dimension(); ++i) p[i] = uniform(box.lo[i], box.hi[i]);
  return p;
}

std::size_t Sampler::index(std::size_t n) {
  if (n == 0) throw DomainError("index range must be nonempty");
  return static_cast<std::size_t>(engine_() % n);
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += threads) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : workers) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

unsigned default_threads() { return std::max(1U, std::thread::hardware_concurrency()); }

}  // namespace volcone

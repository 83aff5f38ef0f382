#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "matprop/certify.hpp"
#include "matprop/decide.hpp"
#include "matprop/partial_algebra.hpp"
#include "oracles.hpp"

using namespace matprop;

namespace {

constexpr int kCases = 1000;

std::vector<std::size_t> random_arities(std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> count(1, 3), arity(0, 3);
  std::vector<std::size_t> a(count(rng));
  for (auto& x : a) x = arity(rng);
  // at least one operation that takes arguments keeps terms interesting
  if (std::all_of(a.begin(), a.end(), [](std::size_t x) { return x == 0; })) a[0] = 2;
  return a;
}

std::vector<Element> random_env(std::mt19937& rng, std::size_t vars, std::size_t carrier) {
  std::uniform_int_distribution<Element> el(0, static_cast<Element>(carrier - 1));
  std::vector<Element> env(vars);
  for (auto& e : env) e = el(rng);
  return env;
}

MatrixSet random_set(std::mt19937& rng, bool pointed, std::size_t max_members, std::size_t max_rows,
                     std::size_t max_left, std::uint32_t max_vars) {
  std::uniform_int_distribution<std::size_t> count(1, max_members);
  std::vector<ExtendedMatrix> ms;
  for (std::size_t i = count(rng); i > 0; --i) ms.push_back(oracle::random_matrix(rng, pointed, max_rows, max_left, max_vars));
  return MatrixSet(std::move(ms), pointed);
}

}  // namespace

TEST_CASE("strict evaluation agrees with the naive evaluator") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<std::size_t> carrier_d(1, 4);
  std::bernoulli_distribution coin(0.5);
  std::uniform_real_distribution<double> density(0.2, 1.0);
  int undefined_seen = 0;
  for (int i = 0; i < kCases; ++i) {
    const bool pointed = coin(rng);
    auto arities = random_arities(rng);
    const std::size_t carrier = carrier_d(rng);
    auto a = oracle::random_algebra(rng, arities, carrier, pointed, density(rng));
    auto t = oracle::random_term(rng, arities, 3, pointed, 4);
    auto env = random_env(rng, 3, carrier);
    auto fast = eval_term(a, t, env);
    CHECK(fast == oracle::naive_eval(a, t, env));
    auto traced = eval_term_traced(a, t, env);
    CHECK(traced.value == fast);
    if (!fast) {
      ++undefined_seen;
      REQUIRE(traced.undefined_at);
      // the reported subterm is itself undefined while all of its arguments are defined
      CHECK_FALSE(oracle::naive_eval(a, *traced.undefined_at, env));
      for (const auto& arg : traced.undefined_at->args()) CHECK(oracle::naive_eval(a, arg, env));
    }
    // undefined arguments poison every application above them
    if (t.is_app())
      for (const auto& arg : t.args())
        if (!oracle::naive_eval(a, arg, env)) CHECK_FALSE(fast);
  }
  CHECK(undefined_seen > 100);
}

TEST_CASE("homomorphisms preserve term values") {
  std::mt19937 rng(12);
  std::uniform_int_distribution<std::size_t> carrier_d(1, 4);
  std::bernoulli_distribution coin(0.5), keep(0.7);
  int defined_seen = 0;
  for (int i = 0; i < kCases; ++i) {
    const bool pointed = coin(rng);
    auto arities = random_arities(rng);
    const std::size_t nb = carrier_d(rng), na = carrier_d(rng);
    auto b = oracle::random_algebra(rng, arities, nb, pointed, 0.8);

    // f : A -> B, basepoint to basepoint
    std::vector<Element> f = random_env(rng, na, nb);
    if (pointed) f[0] = 0;
    // A defines p(args) = a' only where B forces f(a') = p(f(args))
    std::vector<OperationTable> tables;
    for (std::size_t op = 0; op < arities.size(); ++op) {
      OperationTable t(arities[op], na);
      std::vector<Element> args(arities[op], 0);
      for (;;) {
        std::vector<Element> image;
        for (auto x : args) image.push_back(f[x]);
        if (auto v = b.table(op).lookup(image); v && keep(rng)) {
          std::vector<Element> pre;
          for (Element x = 0; x < na; ++x)
            if (f[x] == *v) pre.push_back(x);
          if (!pre.empty()) t.define(args, pre[std::uniform_int_distribution<std::size_t>(0, pre.size() - 1)(rng)]);
        }
        std::size_t k = args.size();
        bool wrapped = true;
        while (k > 0) {
          --k;
          if (++args[k] < na) {
            wrapped = false;
            break;
          }
          args[k] = 0;
        }
        if (wrapped) break;
      }
      tables.push_back(std::move(t));
    }
    FinitePartialAlgebra a(na, pointed ? std::optional<Element>(0) : std::nullopt, std::move(tables));
    REQUIRE(is_closed_homomorphism(f, a, b).is_hom);

    auto t = oracle::random_term(rng, arities, 3, pointed, 3);
    auto env = random_env(rng, 3, na);
    std::vector<Element> image_env;
    for (auto x : env) image_env.push_back(f[x]);
    if (auto v = eval_term(a, t, env)) {
      ++defined_seen;
      CHECK(eval_term(b, t, image_env) == f[*v]);
    }
  }
  CHECK(defined_seen > 200);
}

TEST_CASE("free algebras satisfy their equations, and only just") {
  std::mt19937 rng(13);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::size_t> carrier_d(2, 3);
  for (int i = 0; i < kCases; ++i) {
    const bool pointed = coin(rng);
    auto s = random_set(rng, pointed, 2, 3, 3, 3);
    const std::size_t c = carrier_d(rng);
    auto f = free_algebra(s, c);
    CHECK(satisfies_matrix_set(f, s));
    if (f.carrier_size() != c) continue;  // collapsed
    // dropping any defined instance breaks some equation
    for (std::size_t op = 0; op < f.op_count(); ++op) {
      auto inst = f.table(op).instances();
      if (inst.empty()) continue;
      const auto& pick = inst[std::uniform_int_distribution<std::size_t>(0, inst.size() - 1)(rng)];
      CHECK_FALSE(satisfies_matrix_set(f.without(op, pick.args), s));
    }
  }
}

TEST_CASE("product definedness is componentwise") {
  std::mt19937 rng(14);
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<std::size_t> carrier_d(1, 3);
  for (int i = 0; i < kCases; ++i) {
    const bool pointed = coin(rng);
    auto arities = random_arities(rng);
    const std::size_t na = carrier_d(rng), nb = carrier_d(rng);
    auto a = oracle::random_algebra(rng, arities, na, pointed, 0.6);
    auto b = oracle::random_algebra(rng, arities, nb, pointed, 0.6);
    auto ab = product(a, b);
    REQUIRE(ab.carrier_size() == na * nb);
    for (std::size_t op = 0; op < arities.size(); ++op) {
      auto xs = random_env(rng, arities[op], na), ys = random_env(rng, arities[op], nb);
      std::vector<Element> pairs;
      for (std::size_t k = 0; k < xs.size(); ++k) pairs.push_back(static_cast<Element>(xs[k] * nb + ys[k]));
      auto va = a.table(op).lookup(xs), vb = b.table(op).lookup(ys);
      auto v = ab.table(op).lookup(pairs);
      CHECK(v.has_value() == (va.has_value() && vb.has_value()));
      if (v) CHECK(*v == *va * nb + *vb);
    }
  }
}

TEST_CASE("two-element consistency decides consistency on larger carriers") {
  std::mt19937 rng(15);
  std::bernoulli_distribution coin(0.5);
  int trivial = 0;
  for (int i = 0; i < kCases; ++i) {
    const bool pointed = coin(rng);
    auto s = random_set(rng, pointed, 1, 3, 4, 3);
    auto bp = pointed ? std::optional<Element>(0) : std::nullopt;
    const bool two = forced_instances(s, 2, bp).consistent();
    if (!two) ++trivial;
    CHECK(two == !is_trivial_set(s));
    for (std::size_t c = 3; c <= 4; ++c) CHECK(forced_instances(s, c, bp).consistent() == two);
  }
  CHECK(trivial > 50);
  CHECK(trivial < kCases - 50);
}

TEST_CASE("saturation matches the brute-force closure") {
  std::mt19937 rng(16);
  std::bernoulli_distribution coin(0.5);
  int holds = 0, compared = 0;
  while (compared < kCases) {
    const bool pointed = coin(rng);
    auto s = random_set(rng, pointed, 2, 3, 3, 2);
    auto n = oracle::random_matrix(rng, pointed, 3, 3, 2, 1);
    if (is_trivial_set(s)) continue;
    ++compared;
    SaturationOptions full;
    full.full_saturation = true;
    auto tableau = saturate(s, n, full);
    auto problem = validate_tableau(tableau, s, n);
    CHECK_MESSAGE(!problem, problem.value_or(""));
    CHECK(tableau.size() <= column_space_size(n));
    std::set<Column> got;
    for (const auto& e : tableau) got.insert(e.column);
    auto expected = oracle::naive_closure(s, n);
    CHECK(got == expected);

    auto r = decide(s, n);
    CHECK(r.holds() == expected.count(n.right_column()) > 0);
    problem = validate_tableau(r.tableau, s, n);
    CHECK_MESSAGE(!problem, problem.value_or(""));
    // early exit only ever stops short of the fixpoint
    CHECK(r.tableau.size() <= tableau.size());
    for (std::size_t k = 0; k < r.tableau.size(); ++k) CHECK(r.tableau[k].column == tableau[k].column);
    if (r.holds()) ++holds;
  }
  CHECK(holds > 50);
  CHECK(holds < compared - 50);
}

TEST_CASE("extracted certificates check, and no random term beats a negative verdict") {
  std::mt19937 rng(17);
  std::bernoulli_distribution coin(0.5);
  int extracted = 0;
  for (int i = 0; i < kCases; ++i) {
    const bool pointed = coin(rng);
    auto s = random_set(rng, pointed, 2, 3, 3, 2);
    auto n = oracle::random_matrix(rng, pointed, 3, 3, 2, 1);
    auto r = decide(s, n);
    auto c = extract_term(r, s, n);
    CHECK(c.has_value() == r.holds());
    if (c) {
      ++extracted;
      CHECK(check_certificate(s, n, c->term).valid());
    } else {
      std::vector<std::size_t> arities;
      for (const auto& m : s) arities.push_back(m.left_width());
      for (int k = 0; k < 5; ++k) {
        auto t = oracle::random_term(rng, arities, static_cast<std::uint32_t>(n.left_width()), pointed, 3);
        if (t.max_var() > n.left_width()) continue;
        CHECK_FALSE(check_certificate(s, n, t).valid());
      }
    }
  }
  CHECK(extracted > 100);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "eoprop/autodiff/checkpoint.hpp"
#include "eoprop/autodiff/grad_check.hpp"
#include "eoprop/autodiff/optim.hpp"
#include "support/op_catalog.hpp"

using namespace eoprop::autodiff;
using oracle::random_tensor;

TEST_CASE("every op passes grad_check on ten random shapes") {
    Rng rng(1234);
    for (const auto& op : oracle::op_catalog()) {
        for (int shape = 0; shape < 10; ++shape) {
            const std::size_t r = 1 + rng.below(4), c = 1 + rng.below(4);
            auto inst = op.make(rng, r, c);
            const auto report = grad_check(inst.fn, inst.params);
            INFO(op.name << " " << r << "x" << c << ": " << report.summary());
            CHECK(report.passed);
            CHECK(report.max_rel_error < 1e-4);
        }
    }
}

TEST_CASE("forward op examples") {
    const Value ls = log_softmax(Value::constant(Tensor::from_rows({{0.0, 0.0}})));
    CHECK(ls.data()[0] == doctest::Approx(-std::log(2.0)).epsilon(1e-15));
    CHECK(ls.data()[1] == doctest::Approx(-std::log(2.0)).epsilon(1e-15));

    Value p = Value::parameter(Tensor::scalar(-3.0));
    Value r = relu(p);
    CHECK(r.item() == 0.0);
    r.backward();
    CHECK(p.grad()[0] == 0.0);

    Rng rng(3);
    const Tensor a = random_tensor(3, 4, rng);
    CHECK(matmul(Value::constant(Tensor::identity(3)), Value::constant(a)).data() == a);
}

TEST_CASE("exp(log_softmax) rows sum to one, even for large inputs") {
    Rng rng(8);
    for (int t = 0; t < 50; ++t) {
        const Tensor x = random_tensor(1 + rng.below(5), 1 + rng.below(6), rng, -800.0, 800.0);
        const Tensor y = exp(log_softmax(Value::constant(x), Axis::cols)).data();
        for (std::size_t i = 0; i < y.rows(); ++i) {
            double s = 0;
            for (double v : y.row(i)) s += v;
            CHECK(std::abs(s - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("bce_with_logits values") {
    CHECK(bce_with_logits(Value::constant(Tensor::scalar(0.0)), Tensor::scalar(1.0)).item() ==
          doctest::Approx(std::log(2.0)));
    const double sat = bce_with_logits(Value::constant(Tensor::scalar(20.0)), Tensor::scalar(1.0)).item();
    CHECK(sat >= 0.0);
    CHECK(sat < 1e-8);
    CHECK(std::isfinite(bce_with_logits(Value::constant(Tensor::scalar(-1000.0)), Tensor::scalar(1.0)).item()));

    // d/dz = (sigmoid(z) - y) / C
    Value z = Value::parameter(Tensor::from_rows({{0.3, -1.2}}));
    bce_with_logits(z, Tensor::from_rows({{1.0, 0.0}})).backward();
    CHECK(z.grad()[0] == doctest::Approx((1.0 / (1.0 + std::exp(-0.3)) - 1.0) / 2.0));
    CHECK(z.grad()[1] == doctest::Approx((1.0 / (1.0 + std::exp(1.2))) / 2.0));
}

TEST_CASE("nll_paired values") {
    const Value uniform = Value::constant(Tensor(3, 2, -std::log(2.0)));
    const std::vector<int> y{0, 1, 1};
    CHECK(nll_paired(uniform, y).item() == doctest::Approx(std::log(2.0)));
    const std::vector<int> one{1};
    CHECK(nll_paired(Value::constant(Tensor::from_rows({{-30.0, 0.0}})), one).item() == 0.0);
    CHECK_THROWS_AS(nll_paired(Value::constant(Tensor::from_rows({{NAN, 0.0}})), one), NonFiniteInput);
}

TEST_CASE("backward examples") {
    Value p = Value::parameter(Tensor::from_rows({{1.0, 2.0}}));
    sum(p).backward();
    CHECK(p.grad() == Tensor::from_rows({{1.0, 1.0}}));

    Value q = Value::parameter(Tensor::from_rows({{1.0, 2.0}}));
    sum(multiply(q, q)).backward();
    CHECK(q.grad() == Tensor::from_rows({{2.0, 4.0}}));

    CHECK_THROWS_AS(multiply(q, q).backward(), NonScalarLoss);
}

TEST_CASE("leaf gradients accumulate until zero_grad") {
    Value p = Value::parameter(Tensor::from_rows({{1.0, -2.0}}));
    sum(scale(p, 3.0)).backward();
    sum(scale(p, 3.0)).backward();
    CHECK(p.grad() == Tensor::from_rows({{6.0, 6.0}}));
    p.zero_grad();
    CHECK(p.grad() == Tensor(1, 2));
}

TEST_CASE("diamond graph sums both paths") {
    // y = sum((x*x) * exp(x*x)) with the shared subexpression s = x*x.
    Value x = Value::parameter(Tensor::from_rows({{0.5, -0.3, 1.1}}));
    Value s = multiply(x, x);
    sum(multiply(s, exp(s))).backward();
    for (std::size_t i = 0; i < 3; ++i) {
        const double xv = x.data()[i];
        const double sv = xv * xv;
        CHECK(x.grad()[i] == doctest::Approx((1.0 + sv) * std::exp(sv) * 2.0 * xv).epsilon(1e-13));
    }
}

TEST_CASE("optimizers") {
    Value p = Value::parameter(Tensor::scalar(1.0));
    std::vector<Value> params{p};
    p.mutable_grad() = Tensor::scalar(2.0);
    sgd_step(params, 0.1);
    CHECK(p.item() == doctest::Approx(0.8).epsilon(1e-15));

    Value q = Value::parameter(Tensor::scalar(0.0));
    std::vector<Value> qs{q};
    sum(q).backward();
    AdamState state;
    adam_step(qs, state);
    // m = 0.1, v = 0.001; corrected 1 and 1; step = lr * 1 / (1 + eps)
    CHECK(q.item() == doctest::Approx(-1e-3 / (1.0 + 1e-8)).epsilon(1e-12));
    CHECK(state.step == 1);

    Value z = Value::parameter(Tensor::from_rows({{0.7, -0.2}}));
    std::vector<Value> zs{z};
    sum(scale(z, 0.0)).backward();
    AdamState zstate;
    adam_step(zs, zstate);
    CHECK(z.data() == Tensor::from_rows({{0.7, -0.2}}));

    Value untouched = Value::parameter(Tensor::scalar(1.0));
    std::vector<Value> us{untouched};
    AdamState ustate;
    CHECK_THROWS_AS(adam_step(us, ustate), MissingGradient);
}

TEST_CASE("grad_check passes a quadratic tightly and fails a corrupted rule") {
    Value p = Value::parameter(Tensor::from_rows({{0.3, -0.8, 1.7}}));
    std::vector<Value> params{p};
    const auto quad = grad_check([&] { return sum(multiply(p, p)); }, params, 1e-5, 1e-6);
    CHECK(quad.passed);
    CHECK(quad.max_rel_error < 1e-6);

    // Doubling rule with a wrong gradient of 3.
    auto broken = [&] {
        Tensor out = p.data();
        for (auto& v : out.values()) v *= 2.0;
        return sum(Value::from_op(out, {p},
                                  [](const Tensor& g, const std::vector<Tensor*>& pg) {
                                      if (!pg[0]) return;
                                      for (std::size_t i = 0; i < g.size(); ++i) (*pg[0])[i] += 3.0 * g[i];
                                  },
                                  "broken_double"));
    };
    const auto bad = grad_check(broken, params);
    CHECK_FALSE(bad.passed);
    CHECK(bad.max_rel_error > 0.1);
}

TEST_CASE("glorot init is seeded and bounded") {
    Rng a(9), b(9);
    const Tensor w = glorot_uniform(30, 20, a);
    CHECK(w == glorot_uniform(30, 20, b));
    const double bound = std::sqrt(6.0 / 50.0);
    for (double v : w.values()) CHECK(std::abs(v) <= bound);
}

TEST_CASE("checkpoint layout and round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "eoprop_ckpt_test";
    std::filesystem::create_directories(dir);
    const std::vector<NamedTensor> tensors{{"w", Tensor::from_rows({{1.5, -2.0}, {0.25, 8.0}})},
                                           {"b", Tensor::from_rows({{-0.5}})}};
    nlohmann::ordered_json hyper{{"lr", 0.01}, {"tag", "gcn_bce"}};
    save_checkpoint(dir / "m.ckpt", tensors, hyper);

    std::ifstream in(dir / "m.ckpt", std::ios::binary);
    std::ostringstream bytes;
    bytes << in.rdbuf();
    const std::string s = bytes.str();
    CHECK(s.substr(0, 8) == "EOPCKPT1");
    // 8 magic + 4 version + 4 count + (4+1+8+8) * 2 table + 5 doubles
    CHECK(s.size() == 8 + 4 + 4 + 2 * 21 + 5 * 8);
    CHECK(static_cast<unsigned char>(s[8]) == 1);  // version, little-endian
    CHECK(static_cast<unsigned char>(s[12]) == 2);  // count

    const auto back = load_checkpoint(dir / "m.ckpt");
    REQUIRE(back.size() == 2);
    CHECK(back[0].name == "w");
    CHECK(back[0].tensor == tensors[0].tensor);
    CHECK(back[1].tensor == tensors[1].tensor);

    std::ifstream side(sidecar_path(dir / "m.ckpt"));
    CHECK(nlohmann::json::parse(side).at("tag") == "gcn_bce");

    std::ofstream(dir / "bad.ckpt", std::ios::binary) << "EOPCKPT1";
    CHECK_THROWS_AS(load_checkpoint(dir / "bad.ckpt"), CheckpointError);
    std::ofstream(dir / "magic.ckpt", std::ios::binary) << "NOTACKPT0000";
    CHECK_THROWS_AS(load_checkpoint(dir / "magic.ckpt"), CheckpointError);
}

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "embench/checkpoint.hpp"
#include "embench/dsm.hpp"
#include "embench/trainer.hpp"
#include "support.hpp"

using namespace embench;
using namespace embench::testing;

namespace {

double brute_kl(const Vec& zs, const Vec& zt, double t) {
  double ns = 0.0, nt = 0.0;
  for (Eigen::Index i = 0; i < zs.size(); ++i) ns += std::exp(zs(i) / t), nt += std::exp(zt(i) / t);
  double kl = 0.0;
  for (Eigen::Index i = 0; i < zs.size(); ++i) {
    const double p = std::exp(zs(i) / t) / ns, q = std::exp(zt(i) / t) / nt;
    kl += p * std::log(p / q);
  }
  return kl;
}

Mat random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
  Rng rng(seed);
  Mat m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

}  // namespace

TEST(Softmax, SumsToOneAndIgnoresShift) {
  for (int k = 0; k < 20; ++k) {
    const Vec z = random_matrix(17, 1, static_cast<std::uint64_t>(k)) * 10.0;
    EXPECT_NEAR(softmax(z).sum(), 1.0, 1e-12);
    EXPECT_LT((softmax(z) - softmax((z.array() + 123.0).matrix())).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((log_softmax(z).array().exp().matrix() - softmax(z)).cwiseAbs().maxCoeff(), 1e-12);
  }
  const Vec big = Vec::Constant(4, 1000.0);
  EXPECT_NEAR(softmax(big)(0), 0.25, 1e-15);
}

TEST(CrossEntropy, UniformLogitsGiveLogV) {
  const Mat z = Mat::Zero(64, 1);
  EXPECT_NEAR(detail::cross_entropy(z, {5}, {1.0}, nullptr), std::log(64.0), 1e-12);
}

TEST(Gradients, PretrainLossMatchesFiniteDifferences) {
  const auto st = init_model(tiny_model(), 7);
  const auto ex = random_examples(st.config, 3, 3);
  EXPECT_LT(max_gradient_error(st, [&](const ModelState& s, std::vector<double>* g) {
              return loss_pretrain(s, std::span<const Example>(ex), g);
            }),
            1e-4);
}

TEST(Gradients, DistillationLossMatchesFiniteDifferences) {
  const auto student = init_model(tiny_model(), 7);
  const auto kd = random_kd(init_model(tiny_model(), 9), 3, 4);
  for (FeatMode mode : {FeatMode::TeacherTarget, FeatMode::LiteralPaper}) {
    for (bool dsm : {true, false}) {
      KdConfig c;
      c.mode = mode;
      c.use_dsm = dsm;
      EXPECT_LT(max_gradient_error(student, [&](const ModelState& s, std::vector<double>* g) {
                  return loss_total(s, std::span<const KdExample>(kd), c, g).total;
                }),
                1e-4)
          << feat_mode_name(mode) << " dsm=" << dsm;
    }
  }
}

TEST(Model, ForwardIsDeterministic) {
  const auto a = init_model(tiny_model(), 11), b = init_model(tiny_model(), 11);
  EXPECT_EQ(a.params, b.params);
  EXPECT_NE(a.params, init_model(tiny_model(), 12).params);
  const auto ex = random_examples(a.config, 2, 1);
  EXPECT_EQ(loss_pretrain(a, std::span<const Example>(ex)), loss_pretrain(b, std::span<const Example>(ex)));
}

TEST(Model, EncoderFeaturesAreUnitNorm) {
  const auto st = init_model(tiny_model(), 3);
  for (const auto& e : random_examples(st.config, 4, 2)) {
    const auto f = encoder_forward(st, st.layout(), e.x, 1).f;
    EXPECT_NEAR(f.col(0).norm(), 1.0, 1e-9);
  }
}

TEST(Model, SingleExampleOverfits) {
  TrainConfig tc;
  tc.model = tiny_model();
  tc.batch = 1;
  tc.epochs = 1000;
  tc.lr = 3e-2;
  const auto ex = random_examples(tc.model, 1, 5);
  const auto res = train_stage1(ex, tc);
  EXPECT_LT(res.epoch_loss.back(), 0.01);
  EXPECT_LT(loss_pretrain(res.state, std::span<const Example>(ex)), 0.01);
}

TEST(Model, RejectsBadConfigAndTokens) {
  ModelConfig m = tiny_model();
  m.input_length = 8;
  EXPECT_THROW(init_model(m, 1), Error);
  m = tiny_model();
  m.dsm_rank = m.d;
  EXPECT_THROW(init_model(m, 1), Error);
  const auto st = init_model(tiny_model(), 1);
  auto ex = random_examples(st.config, 1, 1);
  ex[0].answer = {st.config.vocab};
  EXPECT_THROW(loss_pretrain(st, std::span<const Example>(ex)), Error);
}

TEST(Dsm, ProjectionIsIdempotentAndOrthonormal) {
  Mat u = random_matrix(16, 4, 2);
  orthonormalize(u);
  EXPECT_LT(orthonormality_error(u), 1e-12);
  EXPECT_LT(idempotence_error(u), 1e-12);
  const Vec f = random_matrix(16, 1, 3);
  const Vec p = dsm_project(u, f);
  EXPECT_LT((dsm_project(u, p) - p).norm(), 1e-12);
  // the residual is orthogonal to the subspace
  EXPECT_LT((u.transpose() * (f - p)).norm(), 1e-12);
  EXPECT_THROW(dsm_project(u, Vec::Zero(3)), Error);
}

TEST(Dsm, PrincipalBasisRecoversPlantedSubspace) {
  Mat basis = random_matrix(12, 3, 5);
  orthonormalize(basis);
  const Mat f = basis * random_matrix(3, 200, 6);
  const Mat u = principal_basis(f, 3);
  EXPECT_LT(orthonormality_error(u), 1e-10);
  EXPECT_LT((projection_matrix(u) - projection_matrix(basis)).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_THROW(principal_basis(f, 12), Error);
}

TEST(Losses, LogitDistillationMatchesBruteForce) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Vec zs = random_matrix(9, 1, s) * 3.0, zt = random_matrix(9, 1, s + 100) * 3.0;
    for (double t : {1.0, 2.0, 4.0}) {
      const auto ll = loss_logits(zs, zt, t);
      EXPECT_NEAR(ll.value, t * t * brute_kl(zs, zt, t), 1e-10);
      for (Eigen::Index i = 0; i < zs.size(); ++i) {
        Vec a = zs, b = zs;
        a(i) += 1e-6, b(i) -= 1e-6;
        EXPECT_NEAR(ll.grad(i), (loss_logits(a, zt, t).value - loss_logits(b, zt, t).value) / 2e-6, 1e-6);
      }
    }
  }
  EXPECT_NEAR(loss_logits(Vec::Ones(5), Vec::Ones(5), 2.0).value, 0.0, 1e-15);
  EXPECT_THROW(loss_logits(Vec::Ones(5), Vec::Ones(5), 0.0), Error);
}

TEST(Losses, FeatureLossValues) {
  Mat u = Mat::Zero(3, 1);
  u(0, 0) = 1.0;
  const Vec fs = (Vec(3) << 1.0, 2.0, 0.0).finished();
  const Vec ft = (Vec(3) << 0.0, 0.0, 1.0).finished();
  // Φ(f_s) = (1, 0, 0)
  EXPECT_DOUBLE_EQ(loss_feat(fs, ft, &u, FeatMode::TeacherTarget).value, 2.0);
  EXPECT_DOUBLE_EQ(loss_feat(fs, ft, &u, FeatMode::LiteralPaper).value, 4.0);
  EXPECT_DOUBLE_EQ(loss_feat(fs, ft, nullptr, FeatMode::TeacherTarget).value, 6.0);
  EXPECT_DOUBLE_EQ(loss_feat(fs, ft, nullptr, FeatMode::LiteralPaper).value, 0.0);
}

TEST(Losses, CombineWeights) {
  KdConfig c;
  c.lambda_logits = 2.0;
  c.lambda_feat = 4.0;
  EXPECT_DOUBLE_EQ(combine_losses(1.0, 1.0, 1.0, c), 7.0);
  c.lambda_logits = 1.0;
  c.lambda_feat = 2.0;
  EXPECT_DOUBLE_EQ(combine_losses(1.0, 2.0, 4.0, c), 11.0);
  EXPECT_THROW(parse_feat_mode("both"), Error);
}

TEST(Losses, ReplayExamplesContributeTaskOnly) {
  const auto st = init_model(tiny_model(), 7);
  auto kd = random_kd(init_model(tiny_model(), 9), 3, 4);
  for (auto& k : kd) k.replay = true;
  KdConfig c;
  const auto l = loss_total(st, std::span<const KdExample>(kd), c);
  EXPECT_EQ(l.feat, 0.0);
  EXPECT_EQ(l.logits, 0.0);
  EXPECT_EQ(l.total, l.task);
}

TEST(AdamWOptimizer, FrozenEntriesStayBitIdentical) {
  std::vector<double> p = {1.0, 2.0, 3.0}, g = {0.5, -0.5, 1.0};
  AdamW opt(3);
  opt.step(p, g, 0.1, 0.01, {1, 0, 1}, {1, 0, 0});
  EXPECT_EQ(p[1], 2.0);
  // first Adam step moves by lr·sign(g) (bias-corrected), plus decay on entry 0
  EXPECT_NEAR(p[0], 1.0 - 0.1 * 0.01 * 1.0 - 0.1, 1e-6);
  EXPECT_NEAR(p[2], 3.0 - 0.1, 1e-6);
  EXPECT_DOUBLE_EQ(cosine_lr(1.0, 0, 10), 1.0);
  EXPECT_NEAR(cosine_lr(1.0, 5, 10), 0.5, 1e-15);
}

TEST(Checkpoint, RoundTripIsExact) {
  const auto st = init_model(tiny_model(), 21);
  const auto dir = fs::temp_directory_path() / "embench_test_model";
  fs::create_directories(dir);
  save_checkpoint(dir / "m.ckpt", st, {{"stage", 1}});
  const auto back = load_checkpoint(dir / "m.ckpt");
  EXPECT_EQ(back.state.params, st.params);
  EXPECT_EQ(back.state.seed, st.seed);
  EXPECT_EQ(state_hash(back.state), state_hash(st));
  EXPECT_EQ(back.extra.at("stage"), 1);
  const auto ex = random_examples(st.config, 2, 1);
  EXPECT_EQ(loss_pretrain(back.state, std::span<const Example>(ex)), loss_pretrain(st, std::span<const Example>(ex)));
  fs::remove_all(dir);
}

TEST(Checkpoint, CorruptionIsDetected) {
  const std::string good = encode_checkpoint(init_model(tiny_model(), 21));
  std::string flipped = good;
  flipped[flipped.size() / 2] ^= 0x01;
  EXPECT_THROW(decode_checkpoint(flipped), Error);
  EXPECT_THROW(decode_checkpoint(good.substr(0, good.size() - 9)), Error);
  EXPECT_THROW(decode_checkpoint("EMBCKPT0" + good.substr(8)), Error);
  EXPECT_THROW(decode_checkpoint(""), Error);
}

// Copyright 2026 The RENAS Search Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "renas/nn.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace renas::nn {

namespace {

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

void CheckFinite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument(std::string("non-finite ") + what);
    }
  }
}

double LogSumExp(std::span<const double> v) {
  const double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

Vec ShapeLogits(std::span<const double> raw, const LogitShaping& s) {
  Vec out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out[i] = s.tanh_constant * std::tanh(raw[i] / s.temperature);
  }
  return out;
}

Vec Softmax(std::span<const double> logits) {
  if (logits.empty()) throw std::invalid_argument("softmax of empty vector");
  CheckFinite(logits, "logits");
  const double m = *std::max_element(logits.begin(), logits.end());
  Vec p(logits.size());
  double z = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

double Entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

int SampleIndex(std::span<const double> probs, Rng& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  // Rounding left u above the final partial sum; take the last non-zero bin.
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

Draw SoftmaxSample(std::span<const double> logits, Rng& rng) {
  const Vec p = Softmax(logits);
  Draw d;
  d.index = SampleIndex(p, rng);
  d.logprob = logits[d.index] - LogSumExp(logits);
  d.entropy = Entropy(p);
  return d;
}

double Categorical::LogProb(int k) const {
  return logits[k] - LogSumExp(logits);
}

Categorical MakeCategorical(std::span<const double> raw, const LogitShaping& s) {
  CheckFinite(raw, "scores");
  Categorical c;
  c.raw.assign(raw.begin(), raw.end());
  c.logits = ShapeLogits(raw, s);
  c.probs = Softmax(c.logits);
  c.entropy = Entropy(c.probs);
  return c;
}

Vec CategoricalBackward(const Categorical& cat, int chosen, double dlogp,
                        double dent, const LogitShaping& s) {
  const std::size_t n = cat.logits.size();
  const double lse = LogSumExp(cat.logits);
  Vec draw(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double p = cat.probs[k];
    const double logp = cat.logits[k] - lse;
    double dlogit = dlogp * ((static_cast<int>(k) == chosen ? 1.0 : 0.0) - p);
    dlogit += dent * (-p * (logp + cat.entropy));
    const double t = std::tanh(cat.raw[k] / s.temperature);
    draw[k] = dlogit * s.tanh_constant / s.temperature * (1.0 - t * t);
  }
  return draw;
}

std::vector<Vec> Embed(const Tensor2& table, std::span<const int> ids) {
  std::vector<Vec> out;
  out.reserve(ids.size());
  for (int id : ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= table.rows()) {
      throw std::out_of_range("embedding id " + std::to_string(id) +
                              " outside table of " +
                              std::to_string(table.rows()) + " rows");
    }
    const auto row = table.row(id);
    out.emplace_back(row.begin(), row.end());
  }
  return out;
}

void EmbedBackward(std::span<const int> ids, std::span<const Vec> grads,
                   Tensor2& dtable) {
  for (std::size_t t = 0; t < ids.size(); ++t) {
    auto row = dtable.row(ids[t]);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += grads[t][c];
  }
}

Vec Linear(const Tensor2& w, const Tensor2& b, std::span<const double> x) {
  Vec y(b.flat().begin(), b.flat().end());
  if (y.size() != w.rows()) throw std::invalid_argument("bias shape mismatch");
  MatVecAdd(w, x, y);
  return y;
}

void LinearBackward(const Tensor2& w, std::span<const double> x,
                    std::span<const double> dy, Tensor2& dw, Tensor2& db,
                    std::span<double> dx) {
  OuterAdd(dy, x, dw);
  for (std::size_t r = 0; r < dy.size(); ++r) db[r] += dy[r];
  if (!dx.empty()) MatTVecAdd(w, dy, dx);
}

LstmParams LstmParams::Zeros(std::size_t input_size, std::size_t hidden_size) {
  return LstmParams{Tensor2(4 * hidden_size, input_size),
                    Tensor2(4 * hidden_size, hidden_size),
                    Tensor2(4 * hidden_size, 1)};
}

void LstmParams::AppendTo(const std::string& prefix, NamedTensors& out) {
  out.emplace_back(prefix + ".wx", &wx);
  out.emplace_back(prefix + ".wh", &wh);
  out.emplace_back(prefix + ".b", &b);
}

void LstmParams::AppendTo(const std::string& prefix,
                          ConstNamedTensors& out) const {
  out.emplace_back(prefix + ".wx", &wx);
  out.emplace_back(prefix + ".wh", &wh);
  out.emplace_back(prefix + ".b", &b);
}

LstmTape LstmForward(const LstmParams& p, std::span<const Vec> inputs,
                     std::span<const double> h0, std::span<const double> c0) {
  const std::size_t hs = p.hidden_size();
  if (p.wx.rows() != 4 * hs || p.b.size() != 4 * hs) {
    throw std::invalid_argument("inconsistent LSTM parameter shapes");
  }
  if ((!h0.empty() && h0.size() != hs) || (!c0.empty() && c0.size() != hs)) {
    throw std::invalid_argument("LSTM initial state has wrong width");
  }
  LstmTape tape;
  const std::size_t steps = inputs.size();
  tape.x.assign(inputs.begin(), inputs.end());
  tape.h.reserve(steps + 1);
  tape.c.reserve(steps + 1);
  tape.h.push_back(h0.empty() ? Vec(hs, 0.0) : Vec(h0.begin(), h0.end()));
  tape.c.push_back(c0.empty() ? Vec(hs, 0.0) : Vec(c0.begin(), c0.end()));
  tape.gates.reserve(steps);
  tape.tanh_c.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    if (inputs[t].size() != p.input_size()) {
      throw std::invalid_argument("LSTM input has wrong width");
    }
    Vec z(p.b.flat().begin(), p.b.flat().end());
    MatVecAdd(p.wx, inputs[t], z);
    MatVecAdd(p.wh, tape.h[t], z);
    Vec c(hs), h(hs), tc(hs);
    for (std::size_t j = 0; j < hs; ++j) {
      const double i = Sigmoid(z[j]);
      const double f = Sigmoid(z[hs + j]);
      const double g = std::tanh(z[2 * hs + j]);
      const double o = Sigmoid(z[3 * hs + j]);
      z[j] = i;
      z[hs + j] = f;
      z[2 * hs + j] = g;
      z[3 * hs + j] = o;
      c[j] = f * tape.c[t][j] + i * g;
      tc[j] = std::tanh(c[j]);
      h[j] = o * tc[j];
    }
    tape.gates.push_back(std::move(z));
    tape.c.push_back(std::move(c));
    tape.h.push_back(std::move(h));
    tape.tanh_c.push_back(std::move(tc));
  }
  return tape;
}

LstmInputGrads LstmBackward(const LstmParams& p, const LstmTape& tape,
                            std::span<const Vec> dh, LstmParams& grads) {
  const std::size_t hs = p.hidden_size();
  const std::size_t steps = tape.steps();
  if (dh.size() != steps) {
    throw std::invalid_argument("LSTM backward needs one gradient per step");
  }
  LstmInputGrads out;
  out.dx.assign(steps, Vec(p.input_size(), 0.0));
  Vec dh_next(hs, 0.0);
  Vec dc_next(hs, 0.0);
  Vec dz(4 * hs);
  for (std::size_t t = steps; t-- > 0;) {
    const Vec& gate = tape.gates[t];
    const Vec& tc = tape.tanh_c[t];
    const Vec& c_prev = tape.c[t];
    for (std::size_t j = 0; j < hs; ++j) {
      const double i = gate[j];
      const double f = gate[hs + j];
      const double g = gate[2 * hs + j];
      const double o = gate[3 * hs + j];
      const double dhj = dh[t][j] + dh_next[j];
      const double dc = dc_next[j] + dhj * o * (1.0 - tc[j] * tc[j]);
      dz[j] = dc * g * i * (1.0 - i);
      dz[hs + j] = dc * c_prev[j] * f * (1.0 - f);
      dz[2 * hs + j] = dc * i * (1.0 - g * g);
      dz[3 * hs + j] = dhj * tc[j] * o * (1.0 - o);
      dc_next[j] = dc * f;
    }
    OuterAdd(dz, tape.x[t], grads.wx);
    OuterAdd(dz, tape.h[t], grads.wh);
    for (std::size_t r = 0; r < 4 * hs; ++r) grads.b[r] += dz[r];
    MatTVecAdd(p.wx, dz, out.dx[t]);
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    MatTVecAdd(p.wh, dz, dh_next);
  }
  out.dh0 = std::move(dh_next);
  out.dc0 = std::move(dc_next);
  return out;
}

BidirTape BidirEncode(const LstmParams& fwd, const LstmParams& bwd,
                      std::span<const Vec> inputs,
                      std::span<const double> h0_fwd,
                      std::span<const double> h0_bwd) {
  BidirTape tape;
  tape.fwd = LstmForward(fwd, inputs, h0_fwd);
  std::vector<Vec> reversed(inputs.rbegin(), inputs.rend());
  tape.bwd = LstmForward(bwd, reversed, h0_bwd);
  const std::size_t steps = inputs.size();
  tape.outputs.reserve(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    Vec out = tape.fwd.output(t);
    const Vec& back = tape.bwd.output(steps - 1 - t);
    out.insert(out.end(), back.begin(), back.end());
    tape.outputs.push_back(std::move(out));
  }
  return tape;
}

BidirInputGrads BidirBackward(const LstmParams& fwd, const LstmParams& bwd,
                              const BidirTape& tape, std::span<const Vec> dout,
                              LstmParams& dfwd, LstmParams& dbwd) {
  const std::size_t steps = tape.outputs.size();
  const std::size_t hf = fwd.hidden_size();
  const std::size_t hb = bwd.hidden_size();
  std::vector<Vec> dh_f(steps), dh_b(steps);
  for (std::size_t t = 0; t < steps; ++t) {
    if (dout[t].size() != hf + hb) {
      throw std::invalid_argument("bidirectional gradient has wrong width");
    }
    dh_f[t].assign(dout[t].begin(), dout[t].begin() + hf);
    dh_b[steps - 1 - t].assign(dout[t].begin() + hf, dout[t].end());
  }
  LstmInputGrads gf = LstmBackward(fwd, tape.fwd, dh_f, dfwd);
  LstmInputGrads gb = LstmBackward(bwd, tape.bwd, dh_b, dbwd);
  BidirInputGrads out;
  out.dx = std::move(gf.dx);
  for (std::size_t t = 0; t < steps; ++t) {
    const Vec& d = gb.dx[steps - 1 - t];
    for (std::size_t c = 0; c < d.size(); ++c) out.dx[t][c] += d[c];
  }
  out.dh0_fwd = std::move(gf.dh0);
  out.dh0_bwd = std::move(gb.dh0);
  return out;
}

}  // namespace renas::nn

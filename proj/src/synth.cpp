#include "rdm/synth.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "rdm/error.hpp"

namespace rdm {

std::optional<SynthKind> parse_synth_kind(std::string_view name) {
  if (name == "copied") return SynthKind::Copied;
  if (name == "noisy") return SynthKind::Noisy;
  if (name == "independent") return SynthKind::Independent;
  if (name == "intervals") return SynthKind::Intervals;
  return std::nullopt;
}

SynthData synthesize(const SynthOptions& o) {
  if (o.entities == 0 || o.attributes == 0) {
    throw Error(Errc::ConfigInvalid, "synthetic data needs entities and attributes");
  }
  std::mt19937_64 rng(o.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  SynthData out;

  if (o.kind == SynthKind::Intervals) {
    if (o.classes < 2) throw Error(Errc::ConfigInvalid, "intervals need at least two classes");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<AttributeColumn> cols;
    std::vector<std::vector<double>> values(o.attributes, std::vector<double>(o.entities));
    for (std::size_t e = 0; e < o.entities; ++e) {
      for (std::size_t a = 0; a < o.attributes; ++a) values[a][e] = unif(rng);
    }
    TargetColumn t;
    t.name = "class";
    for (std::size_t c = 0; c < o.classes; ++c) t.classes.push_back("c" + std::to_string(c));
    for (std::size_t e = 0; e < o.entities; ++e) {
      const auto c = static_cast<std::size_t>(values[0][e] * static_cast<double>(o.classes));
      t.labels.push_back(static_cast<int>(std::min(c, o.classes - 1)));
    }
    for (std::size_t a = 0; a < o.attributes; ++a) {
      cols.push_back(AttributeColumn::numeric("x" + std::to_string(a), std::move(values[a])));
    }
    std::vector<View> views;
    views.emplace_back(std::move(cols), "x");
    out.predictions = t;
    out.dataset = assemble_dataset(std::move(views), std::move(t));
    return out;
  }

  std::vector<std::vector<double>> a(o.attributes, std::vector<double>(o.entities));
  std::vector<std::vector<double>> b(o.attributes, std::vector<double>(o.entities));
  for (std::size_t e = 0; e < o.entities; ++e) {
    for (std::size_t k = 0; k < o.attributes; ++k) a[k][e] = normal(rng);
  }
  for (std::size_t e = 0; e < o.entities; ++e) {
    for (std::size_t k = 0; k < o.attributes; ++k) {
      switch (o.kind) {
        case SynthKind::Copied: b[k][e] = a[k][e]; break;
        case SynthKind::Noisy: b[k][e] = a[k][e] + o.sigma * normal(rng); break;
        default: b[k][e] = normal(rng); break;
      }
    }
  }
  std::vector<AttributeColumn> ca;
  std::vector<AttributeColumn> cb;
  for (std::size_t k = 0; k < o.attributes; ++k) {
    ca.push_back(AttributeColumn::numeric("a" + std::to_string(k), std::move(a[k])));
    cb.push_back(AttributeColumn::numeric("b" + std::to_string(k), std::move(b[k])));
  }
  std::vector<View> views;
  views.emplace_back(std::move(ca), "a");
  views.emplace_back(std::move(cb), "b");
  out.dataset = assemble_dataset(std::move(views));
  return out;
}

}  // namespace rdm

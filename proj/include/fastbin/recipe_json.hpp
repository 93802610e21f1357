#pragma once

// JSON form of an EmbedderRecipe. Only seeds and parameters are stored; the
// random matrices are regenerated from the seed on load.

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "fastbin/embedding.hpp"

namespace fastbin {

namespace detail {

template <class Enum, std::size_t K>
Enum enum_from_string(const std::string& s, const std::array<Enum, K>& values, const char* what) {
  for (Enum v : values) {
    if (s == to_string(v)) return v;
  }
  throw DomainError(std::string("unknown ") + what + ": " + s);
}

}  // namespace detail

inline EmbedderKind parse_kind(const std::string& s) {
  return detail::enum_from_string(s,
                                  std::array{EmbedderKind::DenseGaussian, EmbedderKind::AcceleratedGaussian,
                                             EmbedderKind::SubsampledCirculant, EmbedderKind::SignedCirculant,
                                             EmbedderKind::MedianFast},
                                  "embedder kind");
}

inline RowMode parse_row_mode(const std::string& s) {
  return detail::enum_from_string(s, std::array{RowMode::FirstM, RowMode::Dyadic, RowMode::Uniform, RowMode::Explicit},
                                  "row mode");
}

inline JlVariant parse_variant(const std::string& s) {
  return detail::enum_from_string(s, std::array{JlVariant::Fjlt, JlVariant::Sjlt, JlVariant::DenseGaussian}, "variant");
}

inline StructureMode parse_shape(const std::string& s) {
  return detail::enum_from_string(s, std::array{StructureMode::Circulant, StructureMode::Toeplitz}, "block shape");
}

inline nlohmann::json to_json(const EmbedderRecipe& r) {
  return {{"kind", to_string(r.kind)},
          {"n", r.n},
          {"m", r.m},
          {"nprime", r.nprime},
          {"B", r.blocks},
          {"s", r.s},
          {"rows", to_string(r.rows)},
          {"explicit_rows", r.explicit_rows},
          {"variant", to_string(r.variant)},
          {"block_shape", to_string(r.block_shape)},
          {"seed", {{"master", r.seed.master}, {"stream", r.seed.stream}}}};
}

inline EmbedderRecipe recipe_from_json(const nlohmann::json& j) {
  EmbedderRecipe r;
  r.kind = parse_kind(j.at("kind").get<std::string>());
  r.n = j.at("n").get<std::size_t>();
  r.m = j.at("m").get<std::size_t>();
  r.nprime = j.value("nprime", std::size_t{0});
  r.blocks = j.value("B", std::size_t{1});
  r.s = j.value("s", std::size_t{0});
  r.rows = parse_row_mode(j.value("rows", std::string("first_m")));
  r.explicit_rows = j.value("explicit_rows", std::vector<std::size_t>{});
  r.variant = parse_variant(j.value("variant", std::string("fjlt")));
  r.block_shape = parse_shape(j.value("block_shape", std::string("circulant")));
  const auto& seed = j.at("seed");
  r.seed = SeedSpec{seed.at("master").get<std::uint64_t>(), seed.value("stream", std::uint64_t{0})};
  return r;
}

}  // namespace fastbin

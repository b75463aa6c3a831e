#pragma once

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>

namespace ifm {

/// Shortest-safe decimal text for a double: 17 significant digits, so that
/// parsing the text back yields the identical value.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  if (res.ec != std::errc{})
    throw std::runtime_error("format_double: conversion failed");
  return {buf, res.ptr};
}

inline double parse_double(std::string_view text) {
  double v = 0.0;
  const auto *first = text.data();
  const auto *last = text.data() + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw std::invalid_argument("parse_double: not a number: '" + std::string(text) + "'");
  return v;
}

} // namespace ifm

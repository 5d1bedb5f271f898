#include "amrex/labels.hpp"

#include <algorithm>
#include <cctype>

#include "amrex/errors.hpp"

namespace amrex {

namespace {

std::string normalise(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
  }
  return out;
}

}  // namespace

std::span<const Label> labels_of(Dataset dataset) {
  if (dataset == Dataset::kFever) return kFeverLabels;
  return kAveritecLabels;
}

VerdictLabel::VerdictLabel(Dataset dataset, Label label) : dataset_(dataset), label_(label) {
  if (dataset == Dataset::kFever && label == Label::kConflicting) {
    throw ValueError("FEVER has no conflicting-evidence label");
  }
}

std::string_view to_string(Dataset dataset) {
  return dataset == Dataset::kFever ? "fever" : "averitec";
}

std::string_view short_name(Label label) {
  switch (label) {
    case Label::kSupports: return "S";
    case Label::kRefutes: return "R";
    case Label::kNotEnoughInfo: return "N";
    case Label::kConflicting: return "C";
  }
  return "?";
}

Dataset parse_dataset(std::string_view text) {
  auto key = normalise(text);
  if (key == "fever") return Dataset::kFever;
  if (key == "averitec") return Dataset::kAveritec;
  throw ValueError("unknown dataset '" + std::string(text) + "'");
}

VerdictLabel parse_label(Dataset dataset, std::string_view text) {
  auto key = normalise(text);
  Label label;
  if (key == "s" || key == "supports" || key == "supported") {
    label = Label::kSupports;
  } else if (key == "r" || key == "refutes" || key == "refuted") {
    label = Label::kRefutes;
  } else if (key == "n" || key == "notenoughinfo" || key == "nei" || key == "notenoughevidence") {
    label = Label::kNotEnoughInfo;
  } else if (dataset == Dataset::kAveritec &&
             (key == "c" || key == "conflictingevidencecherrypicking" ||
              key == "conflictingevidence")) {
    label = Label::kConflicting;
  } else {
    throw DataError("unknown " + std::string(to_string(dataset)) + " label '" +
                    std::string(text) + "'");
  }
  return VerdictLabel(dataset, label);
}

}  // namespace amrex

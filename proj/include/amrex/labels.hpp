#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>

namespace amrex {

enum class Dataset { kFever, kAveritec };

enum class Label { kSupports, kRefutes, kNotEnoughInfo, kConflicting };

inline constexpr std::array<Label, 3> kFeverLabels = {Label::kSupports, Label::kRefutes,
                                                      Label::kNotEnoughInfo};
inline constexpr std::array<Label, 4> kAveritecLabels = {Label::kSupports, Label::kRefutes,
                                                         Label::kNotEnoughInfo, Label::kConflicting};

// The label set of a dataset, in S, R, N[, C] order.
std::span<const Label> labels_of(Dataset dataset);

// A label tagged with the dataset it belongs to. FEVER never carries C.
class VerdictLabel {
 public:
  // Throws ValueError for C on FEVER.
  VerdictLabel(Dataset dataset, Label label);

  Dataset dataset() const { return dataset_; }
  Label label() const { return label_; }

  bool operator==(const VerdictLabel&) const = default;

 private:
  Dataset dataset_;
  Label label_;
};

std::string_view to_string(Dataset dataset);
// "S", "R", "N", "C".
std::string_view short_name(Label label);

// Accepts "fever" / "averitec" (case-insensitive). Throws ValueError.
Dataset parse_dataset(std::string_view text);

// Accepts single-letter codes and the official release strings of the dataset
// (SUPPORTS / Supported, REFUTES / Refuted, NOT ENOUGH INFO / Not Enough Evidence,
// Conflicting Evidence/Cherrypicking). Throws DataError for anything else.
VerdictLabel parse_label(Dataset dataset, std::string_view text);

}  // namespace amrex

#include "burden/matrix.hpp"

#include <stdexcept>

namespace burden {

Vocabulary::Vocabulary(std::vector<std::string> words)
    : words_(std::move(words)) {
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], static_cast<int>(i)).second) {
      throw std::invalid_argument("duplicate vocabulary word '" + words_[i] +
                                  "'");
    }
  }
}

}  // namespace burden

#pragma once

namespace curot {

enum class Modality { pathology, genomics };

}  // namespace curot

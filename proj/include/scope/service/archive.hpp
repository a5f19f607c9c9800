// Copyright 2026 The scope-dti Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <utility>
#include <vector>

namespace scope::service {

// POSIX ustar archive of regular files with fixed metadata (mode 0644, uid
// and gid 0, mtime 0), so equal inputs give equal bytes.
std::string make_tar(const std::vector<std::pair<std::string, std::string>>& files);

// gzip member with mtime 0 and no file name; deterministic for given input.
std::string gzip_compress(const std::string& data);
std::string gzip_decompress(const std::string& data);

// Inverse of make_tar for archives it produced (regular files only).
std::vector<std::pair<std::string, std::string>> read_tar(const std::string& tar);

}  // namespace scope::service

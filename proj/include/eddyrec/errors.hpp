// Copyright (c) 2026 the eddyrec developers. All Rights Reserved.
// SPDX-License-Identifier: Apache-2.0

#ifndef EDDYREC_ERRORS_HPP
#define EDDYREC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eddyrec
{

// Error categories map one-to-one onto the CLI exit codes; see tools/main.cpp.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class MeshError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace eddyrec

#endif  // EDDYREC_ERRORS_HPP

/*
* Copyright (C) 2026 rthome contributors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#ifndef RTHOME_ERROR_H
#define RTHOME_ERROR_H

#include <stdexcept>
#include <string>

namespace rthome
{

/// Invalid configuration or violated precondition detected before any computation.
class ConfigError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Failure during a computation: singular normalization, solver breakdown, negative mass.
class NumericalError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A requested computation would exceed a work limit (e.g. too many integration steps).
class ResourceError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace rthome

#endif // RTHOME_ERROR_H

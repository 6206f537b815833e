#pragma once

#define PA_VERSION_STRING "0.1.0"

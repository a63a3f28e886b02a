#pragma once

#define SUBTLE_VERSION "0.1.0"

import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    globalSetup: ["./test/serve.ts"],
    testTimeout: 30000,
    hookTimeout: 60000,
  },
});

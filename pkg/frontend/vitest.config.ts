import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "node",
    // integration tests spawn the Python service and wait for it to bind
    testTimeout: 30_000,
    hookTimeout: 60_000,
  },
});

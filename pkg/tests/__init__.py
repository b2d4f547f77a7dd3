# Fueter映射测试包（oracles 模块供各测试导入）

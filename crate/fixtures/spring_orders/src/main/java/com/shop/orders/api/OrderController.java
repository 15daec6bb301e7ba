package com.shop.orders.api;

import com.shop.orders.domain.Order;
import com.shop.orders.service.OrderService;
import jakarta.validation.Valid;
import org.springframework.http.HttpStatus;
import org.springframework.http.ResponseEntity;
import org.springframework.web.bind.annotation.GetMapping;
import org.springframework.web.bind.annotation.PathVariable;
import org.springframework.web.bind.annotation.PostMapping;
import org.springframework.web.bind.annotation.RequestBody;
import org.springframework.web.bind.annotation.RequestMapping;
import org.springframework.web.bind.annotation.RestController;

/** HTTP endpoints for placing and reading orders. */
@RestController
@RequestMapping("/api/v1/orders")
public class OrderController {

    private final OrderService orderService;
    private final OrderMapper orderMapper;

    public OrderController(OrderService orderService, OrderMapper orderMapper) {
        this.orderService = orderService;
        this.orderMapper = orderMapper;
    }

    /** Places an order for the authenticated customer. */
    @PostMapping
    public ResponseEntity<OrderResponse> handleCreateOrder(@Valid @RequestBody CreateOrderRequest request) {
        Order order = orderService.createOrder(request.getCustomerId(), request.getSku(), request.getQuantity());
        return ResponseEntity.status(HttpStatus.CREATED).body(orderMapper.toResponse(order));
    }

    @GetMapping("/{id}")
    public ResponseEntity<OrderResponse> handleGetOrder(@PathVariable Long id) {
        return ResponseEntity.ok(orderMapper.toResponse(orderService.findOrder(id)));
    }
}

package com.shop.orders.service;

import com.shop.orders.domain.Order;
import com.shop.orders.domain.OrderRepository;
import java.math.BigDecimal;
import org.springframework.stereotype.Service;
import org.springframework.transaction.annotation.Transactional;

@Service
public class OrderServiceImpl implements OrderService {

    private static final BigDecimal UNIT_PRICE = new BigDecimal("19.99");

    private final OrderRepository orderRepository;

    public OrderServiceImpl(OrderRepository orderRepository) {
        this.orderRepository = orderRepository;
    }

    /** Validates the quantity, prices the order and persists it as pending. */
    @Override
    @Transactional
    public Order createOrder(Long customerId, String sku, int quantity) {
        if (quantity > 10) {
            throw new IllegalArgumentException("quantity above limit");
        }
        Order order = new Order();
        order.setCustomerId(customerId);
        order.setSku(sku);
        order.setTotal(UNIT_PRICE.multiply(BigDecimal.valueOf(quantity)));
        order.setStatus("PENDING");
        return orderRepository.save(order);
    }

    @Override
    public Order findOrder(Long id) {
        return orderRepository.findById(id).orElseThrow(() -> new IllegalStateException("unknown order " + id));
    }
}
